#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "molpipe/dataset.h"
#include "molpipe/error.h"
#include "molpipe/molgraph.h"
#include "molpipe/parallel.h"
#include "molpipe/smiles.h"

namespace molpipe {
namespace {

constexpr std::size_t kBatch = 4096;

struct Screened {
  bool blank = false;
  std::optional<std::string> canonical;
  bool valid = false;
  double weight = 0.0;
  std::size_t tokens = 0;
};

Screened screen(const std::string &line, const Vocab &vocab) {
  Screened s;
  const std::size_t begin = line.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    s.blank = true;
    return s;
  }
  const std::size_t end = line.find_first_of(" \t\r", begin);
  const std::string_view text =
      std::string_view(line).substr(begin, end == std::string::npos
                                               ? std::string::npos
                                               : end - begin);
  try {
    const Molecule mol = parse_smiles(text);
    s.canonical = canonical_smiles(mol);
    s.valid = validate(mol).valid;
    if (!s.valid)
      return s;
    s.weight = molecular_weight(mol);
    s.tokens =
        payload_length(tokenize(*s.canonical, vocab, SourceKind::kMolecule),
                       vocab);
  } catch (const TokenizeError &) {
    s.valid = false;
  } catch (const Error &) {
    s.canonical.reset();
  }
  return s;
}

void finish_library(MoleculeLibrary &lib) {
  std::sort(lib.records.begin(), lib.records.end(),
            [](const LibraryRecord &a, const LibraryRecord &b) {
              return a.smiles < b.smiles;
            });
  lib.k.reset();
  if (!lib.records.empty()) {
    double total = 0.0;
    for (const LibraryRecord &r: lib.records)
      total += static_cast<double>(r.smiles.size());
    lib.k = total / static_cast<double>(lib.records.size());
  }
}

}  // namespace

MoleculeLibrary preprocess(std::istream &corpus, const Vocab &vocab,
                           const PreprocessOptions &options) {
  MoleculeLibrary lib;
  PreprocessStats &st = lib.stats;
  std::unordered_set<std::string> seen;
  std::vector<std::string> lines;
  std::vector<Screened> screened;
  bool more = true;
  while (more) {
    lines.clear();
    std::string line;
    while (lines.size() < kBatch && (more = static_cast<bool>(std::getline(corpus, line))))
      lines.push_back(std::move(line));
    screened.assign(lines.size(), {});
    parallel_for(lines.size(), options.threads,
                 [&](std::size_t i) { screened[i] = screen(lines[i], vocab); });
    for (Screened &s: screened) {
      ++st.lines;
      if (s.blank) {
        ++st.blank;
        continue;
      }
      if (!s.canonical) {
        ++st.unreadable;
        continue;
      }
      if (!seen.insert(*s.canonical).second) {
        ++st.duplicates;
        continue;
      }
      if (!s.valid) {
        ++st.invalid;
        continue;
      }
      if (s.weight > options.max_weight) {
        ++st.weight_rejections;
        continue;
      }
      if (s.tokens > options.max_tokens) {
        ++st.length_rejections;
        continue;
      }
      ++st.accepted;
      lib.records.push_back({ std::move(*s.canonical), s.weight, s.tokens });
    }
  }
  finish_library(lib);
  return lib;
}

void write_library(std::ostream &out, const MoleculeLibrary &lib) {
  char buf[32];
  for (const LibraryRecord &r: lib.records) {
    std::snprintf(buf, sizeof buf, "%.4f", r.weight);
    out << r.smiles << '\t' << buf << '\t' << r.token_length << '\n';
  }
  if (!out)
    throw IoError("failed writing library");
}

MoleculeLibrary read_library(std::istream &in) {
  MoleculeLibrary lib;
  std::string line;
  std::size_t line_no = 0;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line.front() == '#')
      continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 =
        t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw FormatError("library line " + std::to_string(line_no)
                        + ": expected smiles, weight and token length");
    LibraryRecord r;
    r.smiles = line.substr(0, t1);
    const char *wb = line.data() + t1 + 1;
    const char *we = line.data() + t2;
    const char *tb = line.data() + t2 + 1;
    const char *te = line.data() + line.size();
    const auto [wp, wec] = std::from_chars(wb, we, r.weight);
    const auto [tp, tec] = std::from_chars(tb, te, r.token_length);
    if (wec != std::errc() || wp != we || tec != std::errc() || tp != te)
      throw FormatError("library line " + std::to_string(line_no)
                        + ": bad number");
    if (!seen.insert(r.smiles).second)
      throw FormatError("library line " + std::to_string(line_no)
                        + ": duplicate " + r.smiles);
    lib.records.push_back(std::move(r));
  }
  lib.stats.lines = line_no;
  lib.stats.accepted = lib.records.size();
  finish_library(lib);
  return lib;
}

std::string stats_json(const MoleculeLibrary &lib) {
  const PreprocessStats &s = lib.stats;
  nlohmann::ordered_json j;
  j["lines"] = s.lines;
  j["blank"] = s.blank;
  j["unreadable"] = s.unreadable;
  j["duplicates"] = s.duplicates;
  j["invalid"] = s.invalid;
  j["weight_rejections"] = s.weight_rejections;
  j["length_rejections"] = s.length_rejections;
  j["accepted"] = s.accepted;
  j["k"] = lib.k ? nlohmann::ordered_json(*lib.k) : nlohmann::ordered_json(nullptr);
  return j.dump(2);
}

}  // namespace molpipe
