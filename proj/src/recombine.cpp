#include "molpipe/recombine.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "molpipe/error.h"
#include "molpipe/smiles.h"

namespace molpipe {
namespace {

struct Attachment {
  int fragment;
  int dummy;     // global index of the dummy atom
  int anchor;    // global index of the atom it hangs on
  int label;
  BondOrder order;
};

struct Merged {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::vector<Attachment> attachments;
};

Merged merge(std::span<const Molecule> fragments) {
  Merged m;
  for (std::size_t f = 0; f < fragments.size(); ++f) {
    const Molecule &frag = fragments[f];
    const int offset = static_cast<int>(m.atoms.size());
    m.atoms.insert(m.atoms.end(), frag.atoms().begin(), frag.atoms().end());
    for (Bond b: frag.bonds()) {
      b.begin += offset;
      b.end += offset;
      m.bonds.push_back(b);
    }
    for (int a = 0; a < frag.num_atoms(); ++a) {
      if (!frag.atom(a).is_dummy())
        continue;
      if (frag.degree(a) != 1)
        throw UnpairedLabelError("dummy atom is not a single attachment point");
      const Neighbor nb = frag.neighbors(a)[0];
      if (frag.atom(nb.atom).is_dummy())
        throw UnpairedLabelError("dummy atom bonded to another dummy");
      m.attachments.push_back({ static_cast<int>(f), offset + a,
                                offset + nb.atom, frag.atom(a).link_label,
                                frag.bond(nb.bond).order });
    }
  }
  return m;
}

// Joins the given attachment pairs and drops all dummy atoms.
Molecule join(const Merged &m, const std::vector<std::pair<int, int>> &pairs) {
  std::vector<Bond> bonds;
  for (const Bond &b: m.bonds)
    if (!m.atoms[b.begin].is_dummy() && !m.atoms[b.end].is_dummy())
      bonds.push_back(b);
  for (auto [x, y]: pairs) {
    const Attachment &a = m.attachments[x];
    const Attachment &b = m.attachments[y];
    if (a.order != b.order)
      throw UnpairedLabelError("attachment bond orders differ");
    bonds.push_back({ a.anchor, b.anchor, a.order, 0 });
  }
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(m.atoms.size()); ++i)
    if (!m.atoms[i].is_dummy())
      keep.push_back(i);
  std::vector<int> index(m.atoms.size(), -1);
  std::vector<Atom> atoms;
  for (int i: keep) {
    index[i] = static_cast<int>(atoms.size());
    atoms.push_back(m.atoms[i]);
  }
  for (Bond &b: bonds) {
    b.begin = index[b.begin];
    b.end = index[b.end];
  }
  return Molecule(std::move(atoms), std::move(bonds));
}

class PairingSearch {
 public:
  PairingSearch(const Merged &m, int fragments, const BricsRuleTable &rules)
      : m_(m), rules_(rules), parent_(fragments),
        used_(m.attachments.size(), 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  void run() { step(); }

  const std::set<std::string> &results() const { return results_; }
  const std::vector<std::pair<int, int>> &first() const { return first_; }
  bool exhausted() const { return budget_ < 0; }

 private:
  int root(int x) const {
    while (parent_[x] != x)
      x = parent_[x];
    return x;
  }

  void step() {
    if (--budget_ < 0 || results_.size() > 1)
      return;
    int pick = -1;
    for (std::size_t i = 0; i < used_.size(); ++i)
      if (!used_[i]) {
        pick = static_cast<int>(i);
        break;
      }
    if (pick < 0) {
      const std::string smi = canonical_smiles(join(m_, pairs_));
      if (results_.empty())
        first_ = pairs_;
      results_.insert(smi);
      return;
    }
    const Attachment &a = m_.attachments[pick];
    used_[pick] = 1;
    for (std::size_t j = pick + 1; j < used_.size(); ++j) {
      const Attachment &b = m_.attachments[j];
      if (used_[j] || !rules_.compatible(a.label, b.label)
          || a.order != b.order)
        continue;
      const int ra = root(a.fragment), rb = root(b.fragment);
      if (ra == rb)
        continue;
      used_[j] = 1;
      parent_[ra] = rb;
      pairs_.emplace_back(pick, static_cast<int>(j));
      step();
      pairs_.pop_back();
      parent_[ra] = ra;
      used_[j] = 0;
    }
    used_[pick] = 0;
  }

  const Merged &m_;
  const BricsRuleTable &rules_;
  std::vector<int> parent_;
  std::vector<char> used_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<std::pair<int, int>> first_;
  std::set<std::string> results_;
  long budget_ = 200000;
};

}  // namespace

Molecule rejoin(const FragmentSet &fs, const BricsRuleTable &rules) {
  if (fs.links.empty())
    return rejoin(std::span<const Molecule>(fs.fragments), rules);

  const Merged m = merge(fs.fragments);
  std::vector<int> offsets;
  int total = 0;
  for (const Molecule &f: fs.fragments) {
    offsets.push_back(total);
    total += f.num_atoms();
  }
  auto attachment_of = [&](int fragment, int dummy) {
    if (fragment < 0 || fragment >= static_cast<int>(fs.fragments.size()))
      throw UnpairedLabelError("link refers to a missing fragment");
    const int global = offsets[fragment] + dummy;
    for (std::size_t i = 0; i < m.attachments.size(); ++i)
      if (m.attachments[i].dummy == global)
        return static_cast<int>(i);
    throw UnpairedLabelError("link refers to an atom that is not a dummy");
  };
  std::vector<std::pair<int, int>> pairs;
  std::vector<char> seen(m.attachments.size(), 0);
  for (const FragmentLink &link: fs.links) {
    const int a = attachment_of(link.fragment_a, link.dummy_a);
    const int b = attachment_of(link.fragment_b, link.dummy_b);
    if (seen[a] || seen[b])
      throw UnpairedLabelError("dummy atom used by two links");
    if (m.attachments[a].label != link.labels.first
        || m.attachments[b].label != link.labels.second)
      throw UnpairedLabelError("link labels do not match the dummy atoms");
    seen[a] = seen[b] = 1;
    pairs.emplace_back(a, b);
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw UnpairedLabelError("dummy atom without a link");
  return join(m, pairs);
}

Molecule rejoin(std::span<const Molecule> fragments,
                const BricsRuleTable &rules) {
  if (fragments.empty())
    throw UnpairedLabelError("no fragments to rejoin");
  const Merged m = merge(fragments);
  const std::size_t needed = 2 * (fragments.size() - 1);
  if (m.attachments.size() != needed)
    throw UnpairedLabelError(
        std::to_string(m.attachments.size()) + " attachment points for "
        + std::to_string(fragments.size()) + " fragments (expected "
        + std::to_string(needed) + ")");
  if (needed == 0)
    return join(m, {});

  PairingSearch search(m, static_cast<int>(fragments.size()), rules);
  search.run();
  if (search.results().size() > 1)
    throw AmbiguityError("fragments can be joined into "
                         "more than one molecule");
  if (search.exhausted())
    throw AmbiguityError("pairing search budget exhausted");
  if (search.results().empty())
    throw UnpairedLabelError("no compatible pairing joins all fragments");
  return join(m, search.first());
}

Molecule rejoin_smiles(std::string_view dotted, const BricsRuleTable &rules) {
  const Molecule all = parse_smiles(dotted);
  std::vector<Molecule> parts;
  for (const auto &comp: all.components())
    parts.push_back(all.subgraph(comp));
  return rejoin(std::span<const Molecule>(parts), rules);
}

Molecule carbon_cap(const Molecule &fragment) {
  std::vector<Atom> atoms(fragment.atoms().begin(), fragment.atoms().end());
  bool any = false;
  for (int a = 0; a < fragment.num_atoms(); ++a) {
    Atom &atom = atoms[a];
    if (!atom.is_dummy())
      continue;
    any = true;
    atom = Atom {};
    atom.element = 6;
    atom.hydrogens = static_cast<std::uint8_t>(
        std::max(0, 4 - fragment.bond_order_sum(a)));
  }
  if (!any)
    return fragment;
  return Molecule(std::move(atoms),
                  std::vector<Bond>(fragment.bonds().begin(),
                                    fragment.bonds().end()),
                  fragment.source_text());
}

}  // namespace molpipe
