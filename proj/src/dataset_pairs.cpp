#include <algorithm>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "molpipe/dataset.h"
#include "molpipe/error.h"
#include "molpipe/hash.h"
#include "molpipe/molgraph.h"
#include "molpipe/parallel.h"
#include "molpipe/smiles.h"

namespace molpipe {
namespace {

constexpr std::size_t kBatch = 1024;

enum class Skip { kNone, kNoBond, kUnparseable, kEmpty, kTooLong, kTooHeavy, kDisconnected };

struct Pair {
  Skip skip = Skip::kNone;
  InstructionRecord forward, backward;
};

void count(PairStats &st, Skip s) {
  switch (s) {
    case Skip::kNone: ++st.pairs; break;
    case Skip::kNoBond: ++st.no_brics_bond; break;
    case Skip::kUnparseable: ++st.unparseable; break;
    case Skip::kEmpty: ++st.empty; break;
    case Skip::kTooLong: ++st.too_long; break;
    case Skip::kTooHeavy: ++st.too_heavy; break;
    case Skip::kDisconnected: ++st.disconnected; break;
  }
}

std::size_t tokens(const std::string &text, SourceKind kind,
                   const PairOptions &o, const Vocab &vocab) {
  return payload_length(tokenize(text, vocab, kind, o.pairing), vocab);
}

// Runs build(i) over [0, n) in parallel batches and emits in index order.
template <class Build>
PairStats run_batches(std::size_t n, unsigned threads, const RecordSink &sink,
                      Build &&build) {
  PairStats st;
  std::unordered_set<std::string> ids;
  std::vector<Pair> out;
  for (std::size_t start = 0; start < n; start += kBatch) {
    const std::size_t len = std::min(kBatch, n - start);
    out.assign(len, {});
    parallel_for(len, threads,
                 [&](std::size_t i) { out[i] = build(start + i); });
    for (Pair &p: out) {
      ++st.inputs;
      if (p.skip == Skip::kNone && !ids.insert(p.forward.id).second) {
        ++st.duplicates;
        continue;
      }
      count(st, p.skip);
      if (p.skip == Skip::kNone) {
        sink(p.forward);
        sink(p.backward);
      }
    }
  }
  return st;
}

}  // namespace

PairStats make_pretrain_pairs(const MoleculeLibrary &lib,
                              const PairOptions &options,
                              const TemplateSet &templates, const Vocab &vocab,
                              const RecordSink &sink) {
  if (lib.records.empty())
    throw DomainError("cannot build pretraining pairs from an empty library");
  return run_batches(lib.records.size(), options.threads, sink, [&](std::size_t i) {
    Pair p;
    const LibraryRecord &rec = lib.records[i];
    Molecule mol;
    try {
      mol = parse_smiles(rec.smiles);
    } catch (const SyntaxError &) {
      p.skip = Skip::kUnparseable;
      return p;
    }
    if (molecular_weight(mol) > options.max_weight) {
      p.skip = Skip::kTooHeavy;
      return p;
    }
    if (!mol.connected()) {
      p.skip = Skip::kDisconnected;
      return p;
    }
    const FragmentSet fs = fragment(mol, options.fragment);
    if (fs.cleaved.empty()) {
      p.skip = Skip::kNoBond;
      return p;
    }
    const std::string &parent = fs.parent_canonical;
    const std::string frags = fs.joined();
    if (tokens(parent, SourceKind::kMolecule, options, vocab) > options.max_tokens
        || tokens(frags, SourceKind::kFragmentSet, options, vocab)
               > options.max_tokens) {
      p.skip = Skip::kTooLong;
      return p;
    }
    const std::string parent_id = to_hex(fnv1a64(parent));
    const std::string pair_id = to_hex(fnv1a64(parent, fnv1a64("pretrain:")));
    const std::vector<std::pair<std::string, std::string>> meta = {
      { "parent_id", parent_id },
      { "seed", to_hex(fs.seed) },
      { "cap", std::to_string(fs.cap) },
    };
    p.forward = { pair_id + "-f", Task::kFragmentation, Direction::kForward,
                  fill_template(templates, Task::kFragmentation, parent, meta),
                  parent, frags, meta };
    p.backward = { pair_id + "-b", Task::kRecombination, Direction::kBackward,
                   fill_template(templates, Task::kRecombination, frags, meta),
                   frags, parent, meta };
    return p;
  });
}

std::vector<Reaction> read_reactions(std::istream &in) {
  std::vector<Reaction> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line.front() == '#')
      continue;
    std::vector<std::string> cols;
    std::istringstream fields(line);
    for (std::string f; std::getline(fields, f, '\t');)
      cols.push_back(f);
    Reaction r;
    if (!cols.empty()) {
      std::istringstream parts(cols[0]);
      for (std::string s; std::getline(parts, s, '.');)
        if (!s.empty())
          r.reactants.push_back(s);
    }
    if (cols.size() >= 2)
      r.product = cols[1];
    if (cols.size() >= 3)
      r.reaction_type = cols[2];
    out.push_back(std::move(r));
  }
  return out;
}

PairStats make_finetune_pairs(const std::vector<Reaction> &reactions,
                              const PairOptions &options,
                              const TemplateSet &templates, const Vocab &vocab,
                              const RecordSink &sink) {
  return run_batches(reactions.size(), options.threads, sink, [&](std::size_t i) {
    Pair p;
    const Reaction &rx = reactions[i];
    if (rx.reactants.empty() || rx.product.empty()) {
      p.skip = Skip::kEmpty;
      return p;
    }
    std::string joined;
    for (const std::string &r: rx.reactants)
      joined += (joined.empty() ? "" : ".") + r;
    std::string reactants, product;
    double weights[2];
    try {
      const Molecule rm = parse_smiles(joined);
      const Molecule pm = parse_smiles(rx.product);
      if (!validate(rm).valid || !validate(pm).valid) {
        p.skip = Skip::kUnparseable;
        return p;
      }
      reactants = canonical_smiles(rm);
      product = canonical_smiles(pm);
      weights[0] = molecular_weight(rm);
      weights[1] = molecular_weight(pm);
    } catch (const SyntaxError &) {
      p.skip = Skip::kUnparseable;
      return p;
    }
    if (std::max(weights[0], weights[1]) > options.max_weight) {
      p.skip = Skip::kTooHeavy;
      return p;
    }
    try {
      if (tokens(reactants, SourceKind::kMolecule, options, vocab)
              > options.max_tokens
          || tokens(product, SourceKind::kMolecule, options, vocab)
                 > options.max_tokens) {
        p.skip = Skip::kTooLong;
        return p;
      }
    } catch (const TokenizeError &) {
      p.skip = Skip::kUnparseable;
      return p;
    }
    const std::string key = reactants + ">" + rx.reaction_type + ">" + product;
    const std::string pair_id = to_hex(fnv1a64(key, fnv1a64("reaction:")));
    const std::vector<std::pair<std::string, std::string>> meta = {
      { "reaction_type", rx.reaction_type },
      { "parent_id", to_hex(fnv1a64(product)) },
    };
    p.forward = { pair_id + "-f", Task::kRetrosynthesis, Direction::kForward,
                  fill_template(templates, Task::kRetrosynthesis, product, meta),
                  product, reactants, meta };
    p.backward = { pair_id + "-b", Task::kReaction, Direction::kBackward,
                   fill_template(templates, Task::kReaction, reactants, meta),
                   reactants, product, meta };
    return p;
  });
}

}  // namespace molpipe
