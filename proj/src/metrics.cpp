#include "molpipe/metrics.h"

#include <cstdio>
#include <memory>
#include <numeric>

#include "json.hpp"
#include "molpipe/error.h"
#include "molpipe/fingerprint.h"
#include "molpipe/molgraph.h"
#include "molpipe/parallel.h"
#include "molpipe/smiles.h"

namespace molpipe {
namespace {

std::optional<std::string> try_canonical(std::string_view s) {
  try {
    return canonical_smiles(parse_smiles(s));
  } catch (const Error &) {
    return std::nullopt;
  }
}

std::unique_ptr<Molecule> parse_valid(std::string_view s) {
  try {
    auto mol = std::make_unique<Molecule>(parse_smiles(s));
    if (!validate(*mol).valid)
      return nullptr;
    return mol;
  } catch (const Error &) {
    return nullptr;
  }
}

struct PairScore {
  int exact = 0;
  double bleu = 0.0;
  std::size_t lev = 0;
  bool valid = false;
  bool fts = false;
  double path = 0.0, keys = 0.0, morgan = 0.0;
};

double similarity(const Molecule &a, const Molecule &b,
                  FingerprintScheme scheme) {
  return tanimoto(fingerprint(a, scheme), fingerprint(b, scheme));
}

}  // namespace

int exact_match(std::string_view pred, std::string_view ref) {
  if (pred.empty() || ref.empty())
    return 0;
  const auto p = try_canonical(pred);
  if (!p)
    return 0;
  const auto r = try_canonical(ref);
  return r && *p == *r ? 1 : 0;
}

double topk_accuracy(const std::vector<std::vector<std::string>> &ranked,
                     const std::vector<std::string> &refs, int k) {
  if (k < 1)
    throw DomainError("top-k: k must be >= 1");
  if (ranked.size() != refs.size())
    throw DomainError("top-k: prediction and reference counts differ");
  if (refs.empty())
    return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const std::size_t limit =
        std::min(ranked[i].size(), static_cast<std::size_t>(k));
    for (std::size_t j = 0; j < limit; ++j) {
      if (exact_match(ranked[i][j], refs[i])) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(refs.size());
}

EvalReport evaluate(const std::vector<std::string> &preds,
                    const std::vector<std::string> &refs,
                    const EvalOptions &options) {
  if (preds.size() != refs.size())
    throw DomainError("evaluate: " + std::to_string(preds.size())
                      + " predictions vs " + std::to_string(refs.size())
                      + " references");
  std::vector<PairScore> scores(preds.size());
  parallel_for(preds.size(), options.threads, [&](std::size_t i) {
    PairScore &s = scores[i];
    s.exact = exact_match(preds[i], refs[i]);
    s.bleu = bleu(preds[i], refs[i]);
    s.lev = levenshtein(preds[i], refs[i]);
    const auto p = parse_valid(preds[i]);
    s.valid = p != nullptr;
    const auto r = parse_valid(refs[i]);
    if (p && r) {
      s.fts = true;
      s.path = similarity(*p, *r, FingerprintScheme::kPath);
      s.keys = similarity(*p, *r, FingerprintScheme::kKeys);
      s.morgan = similarity(*p, *r, FingerprintScheme::kMorgan);
    } else if (options.invalid_as_zero) {
      s.fts = true;
    }
  });

  EvalReport rep;
  rep.n = preds.size();
  if (rep.n == 0)
    return rep;
  double path = 0, keys = 0, morgan = 0;
  for (const PairScore &s: scores) {
    rep.exact += s.exact;
    rep.bleu += s.bleu;
    rep.levenshtein += static_cast<double>(s.lev);
    rep.validity += s.valid ? 1 : 0;
    if (s.fts) {
      ++rep.fts_pairs;
      path += s.path;
      keys += s.keys;
      morgan += s.morgan;
    }
  }
  const double n = static_cast<double>(rep.n);
  rep.exact /= n;
  rep.bleu /= n;
  rep.levenshtein /= n;
  rep.validity /= n;
  rep.fts_skipped = rep.n - rep.fts_pairs;
  if (rep.fts_pairs > 0) {
    const double m = static_cast<double>(rep.fts_pairs);
    rep.fts_path = path / m;
    rep.fts_keys = keys / m;
    rep.fts_morgan = morgan / m;
  }
  return rep;
}

std::string to_json(const EvalReport &r) {
  nlohmann::ordered_json j;
  auto opt = [](const std::optional<double> &v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  j["exact"] = r.exact;
  j["bleu"] = r.bleu;
  j["levenshtein"] = r.levenshtein;
  j["fts_path"] = opt(r.fts_path);
  j["fts_keys"] = opt(r.fts_keys);
  j["fts_morgan"] = opt(r.fts_morgan);
  j["validity"] = r.validity;
  j["n"] = r.n;
  j["fts_pairs"] = r.fts_pairs;
  j["fts_skipped"] = r.fts_skipped;
  return j.dump(2);
}

std::string to_table(const EvalReport &r) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  auto opt = [&](const std::optional<double> &v) {
    return v ? num(*v) : std::string("n/a");
  };
  const std::vector<std::pair<std::string, std::string>> cols = {
    { "EXACT", num(r.exact) },
    { "BLEU", num(r.bleu) },
    { "LEVENSHTEIN", num(r.levenshtein) },
    { "PATH FTS", opt(r.fts_path) },
    { "KEYS FTS", opt(r.fts_keys) },
    { "MORGAN FTS", opt(r.fts_morgan) },
    { "VALIDITY", num(r.validity) },
    { "N", std::to_string(r.n) },
  };
  std::string head, vals;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const std::size_t w = std::max(cols[i].first.size(), cols[i].second.size());
    const std::string sep = i + 1 < cols.size() ? "  " : "";
    head += cols[i].first + std::string(w - cols[i].first.size(), ' ') + sep;
    vals += cols[i].second + std::string(w - cols[i].second.size(), ' ') + sep;
  }
  while (!head.empty() && head.back() == ' ')
    head.pop_back();
  while (!vals.empty() && vals.back() == ' ')
    vals.pop_back();
  std::string out = head + "\n" + vals + "\n";
  if (r.fts_skipped > 0)
    out += "fingerprint pairs skipped: " + std::to_string(r.fts_skipped) + "\n";
  return out;
}

}  // namespace molpipe
