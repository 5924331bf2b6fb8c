#include "molpipe/brics.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "molpipe/element.h"
#include "molpipe/error.h"
#include "molpipe/hash.h"
#include "molpipe/resources.h"
#include "molpipe/smiles.h"

namespace molpipe {
namespace {

constexpr int kMaxLabel = 16;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.push_back(s.substr(start, at - start));
    if (at == std::string_view::npos)
      return out;
    start = at + 1;
  }
}

int parse_label(std::string_view text, int line) {
  int v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v < 1
      || v > kMaxLabel)
    throw FormatError("BRICS rules line " + std::to_string(line)
                      + ": bad label '" + std::string(text) + "'");
  return v;
}

std::uint64_t bounded(std::mt19937_64 &rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

}  // namespace

BricsRuleTable BricsRuleTable::parse(std::string_view text) {
  BricsRuleTable table;
  std::istringstream in { std::string(text) };
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (line.empty() || line.front() == '#')
      continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 3)
      throw FormatError("BRICS rules line " + std::to_string(line_no)
                        + ": expected 3 tab-separated columns");
    BricsRule rule;
    rule.label = parse_label(cols[0], line_no);
    if (table.find(rule.label))
      throw FormatError("BRICS rules line " + std::to_string(line_no)
                        + ": duplicate label " + std::to_string(rule.label));
    try {
      rule.environment = SmartsPattern::compile(cols[1]);
    } catch (const SyntaxError &e) {
      throw FormatError("BRICS rules line " + std::to_string(line_no) + ": "
                        + e.what());
    }
    for (std::string_view p: split(cols[2], ',')) {
      if (!p.empty() && p.back() == '=') {
        p.remove_suffix(1);
        rule.double_partners.push_back(parse_label(p, line_no));
      } else {
        rule.partners.push_back(parse_label(p, line_no));
      }
    }
    table.rules_.push_back(std::move(rule));
  }

  table.rank_.assign((kMaxLabel + 1) * (kMaxLabel + 1), -1);
  for (const BricsRule &rule: table.rules_) {
    for (int p: rule.partners) {
      const BricsRule *other = table.find(p);
      if (!other
          || std::find(other->partners.begin(), other->partners.end(),
                       rule.label)
                 == other->partners.end())
        throw FormatError("BRICS rules: pair " + std::to_string(rule.label)
                          + "-" + std::to_string(p) + " is not symmetric");
    }
  }
  for (std::size_t line = 0; line < table.rules_.size(); ++line) {
    const BricsRule &rule = table.rules_[line];
    int pos = 0;
    for (int p: rule.partners) {
      if (p < rule.label)
        continue;
      const int rank = static_cast<int>(line) * (kMaxLabel + 1) + pos++;
      table.rank_[rule.label * (kMaxLabel + 1) + p] = rank;
      table.rank_[p * (kMaxLabel + 1) + rule.label] = rank;
    }
  }
  return table;
}

const BricsRuleTable &BricsRuleTable::builtin() {
  static const BricsRuleTable table = parse(resources::brics_rules());
  return table;
}

const BricsRule *BricsRuleTable::find(int label) const {
  for (const BricsRule &r: rules_)
    if (r.label == label)
      return &r;
  return nullptr;
}

int BricsRuleTable::pair_rank(int a, int b) const {
  if (a < 1 || b < 1 || a > kMaxLabel || b > kMaxLabel || rank_.empty())
    return -1;
  return rank_[a * (kMaxLabel + 1) + b];
}

std::vector<int> BricsRuleTable::labels_at(const Molecule &mol,
                                           int atom) const {
  std::vector<int> out;
  for (const BricsRule &r: rules_)
    if (!r.partners.empty() && r.environment.matches_at(mol, atom))
      out.push_back(r.label);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BricsBond> find_brics_bonds(const Molecule &mol,
                                        const BricsRuleTable &rules) {
  for (const Atom &a: mol.atoms())
    if (a.is_dummy())
      throw DomainError("molecule already contains dummy atoms");

  std::vector<std::vector<int>> labels(mol.num_atoms());
  std::vector<char> computed(mol.num_atoms(), 0);
  auto labels_of = [&](int atom) -> const std::vector<int> & {
    if (!computed[atom]) {
      labels[atom] = rules.labels_at(mol, atom);
      computed[atom] = 1;
    }
    return labels[atom];
  };

  std::vector<BricsBond> out;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    if (bond.order != BondOrder::kSingle || mol.bond_in_ring(b))
      continue;
    const auto &la = labels_of(bond.begin);
    if (la.empty())
      continue;
    const auto &lb = labels_of(bond.end);
    int best = -1;
    std::pair<int, int> chosen;
    for (int x: la) {
      for (int y: lb) {
        const int r = rules.pair_rank(x, y);
        // Equal ranks only arise for the mirrored orientation of one pair;
        // keep the lower label on the begin side.
        if (r >= 0 && (best < 0 || r < best)) {
          best = r;
          chosen = { x, y };
        }
      }
    }
    if (best >= 0)
      out.push_back({ b, chosen });
  }
  return out;
}

std::int64_t max_fragments(std::int64_t length, double k, double alpha) {
  if (length < 1)
    throw DomainError("max_fragments: L must be >= 1");
  if (!std::isfinite(k) || k < 1.0)
    throw DomainError("max_fragments: k must be >= 1");
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw DomainError("max_fragments: alpha must be > 0");
  const double l = static_cast<double>(length);
  if (l < k)
    return length;
  const double cap = std::ceil(std::pow(std::ceil(l / k), alpha));
  if (!(cap < l))
    return length;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(cap));
}

std::string FragmentSet::joined() const {
  std::string out;
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    if (i > 0)
      out += '.';
    out += smiles[i];
  }
  return out;
}

FragmentSet fragment(const Molecule &mol, const FragmentParams &params,
                     const BricsRuleTable &rules) {
  if (mol.empty())
    throw DomainError("cannot fragment an empty molecule");
  if (!mol.connected())
    throw DomainError("cannot fragment a disconnected molecule");

  const CanonicalForm form = canonical_form(mol);
  const Molecule parent = mol.renumbered(form.atom_order);

  FragmentSet fs;
  fs.parent_canonical = form.smiles;
  fs.cap = max_fragments(static_cast<std::int64_t>(form.smiles.size()),
                         params.k, params.alpha);
  fs.seed = hash_combine(params.seed, fnv1a64(form.smiles));

  std::vector<BricsBond> eligible = find_brics_bonds(parent, rules);
  fs.eligible = static_cast<std::int64_t>(eligible.size());
  const std::size_t budget = static_cast<std::size_t>(fs.cap - 1);
  if (eligible.size() > budget) {
    std::mt19937_64 rng(fs.seed);
    for (std::size_t i = 0; i < budget; ++i) {
      const std::size_t j = i + bounded(rng, eligible.size() - i);
      std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(budget);
    std::sort(eligible.begin(), eligible.end(),
              [](const BricsBond &x, const BricsBond &y) {
                return x.bond_index < y.bond_index;
              });
  }
  fs.cleaved = eligible;

  if (eligible.empty()) {
    fs.fragments.push_back(parent);
    fs.smiles.push_back(form.smiles);
    return fs;
  }

  // Rebuild with each cut bond replaced by two dummy attachments.
  std::vector<Atom> atoms(parent.atoms().begin(), parent.atoms().end());
  std::vector<char> cut(parent.num_bonds(), 0);
  for (const BricsBond &bb: eligible)
    cut[bb.bond_index] = 1;
  std::vector<Bond> bonds;
  for (int b = 0; b < parent.num_bonds(); ++b)
    if (!cut[b])
      bonds.push_back(parent.bond(b));
  std::vector<std::pair<int, int>> dummies;  // per cut: (dummy_a, dummy_b)
  for (const BricsBond &bb: eligible) {
    const Bond &orig = parent.bond(bb.bond_index);
    Atom da;
    da.element = kDummyElement;
    da.link_label = static_cast<std::uint8_t>(bb.labels.first);
    Atom db = da;
    db.link_label = static_cast<std::uint8_t>(bb.labels.second);
    const int ia = static_cast<int>(atoms.size());
    atoms.push_back(da);
    const int ib = static_cast<int>(atoms.size());
    atoms.push_back(db);
    bonds.push_back({ orig.begin, ia, orig.order, 0 });
    bonds.push_back({ orig.end, ib, orig.order, 0 });
    dummies.emplace_back(ia, ib);
  }
  const Molecule split_mol(std::move(atoms), std::move(bonds));

  struct Piece {
    Molecule mol;
    std::string smiles;
    std::vector<int> new_index;  // split_mol atom -> piece atom, -1 if absent
  };
  std::vector<Piece> pieces;
  for (const auto &comp: split_mol.components()) {
    const Molecule sub = split_mol.subgraph(comp);
    const CanonicalForm cf = canonical_form(sub);
    Piece piece { sub.renumbered(cf.atom_order), cf.smiles,
                  std::vector<int>(split_mol.num_atoms(), -1) };
    for (std::size_t i = 0; i < cf.atom_order.size(); ++i)
      piece.new_index[comp[cf.atom_order[i]]] = static_cast<int>(i);
    pieces.push_back(std::move(piece));
  }
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece &x, const Piece &y) {
                     return x.smiles < y.smiles;
                   });

  auto locate = [&](int atom) {
    for (std::size_t f = 0; f < pieces.size(); ++f)
      if (pieces[f].new_index[atom] >= 0)
        return std::pair<int, int>(static_cast<int>(f),
                                   pieces[f].new_index[atom]);
    throw Error("fragment bookkeeping lost an atom");
  };
  for (std::size_t c = 0; c < eligible.size(); ++c) {
    FragmentLink link;
    link.labels = eligible[c].labels;
    std::tie(link.fragment_a, link.dummy_a) = locate(dummies[c].first);
    std::tie(link.fragment_b, link.dummy_b) = locate(dummies[c].second);
    fs.links.push_back(link);
  }
  for (Piece &p: pieces) {
    fs.fragments.push_back(std::move(p.mol));
    fs.smiles.push_back(std::move(p.smiles));
  }
  return fs;
}

}  // namespace molpipe
