#include "molpipe/molecule.h"

#include <algorithm>
#include <deque>
#include <set>
#include <utility>

#include "molpipe/error.h"

namespace molpipe {

int valence_contribution(BondOrder order) noexcept {
  switch (order) {
  case BondOrder::kSingle:
  case BondOrder::kAromatic:
    return 1;
  case BondOrder::kDouble:
    return 2;
  case BondOrder::kTriple:
    return 3;
  case BondOrder::kQuadruple:
    return 4;
  }
  return 1;
}

Molecule::Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds,
                   std::string source_text)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)),
      source_(std::move(source_text)) {
  const int n = num_atoms();
  std::set<std::pair<int, int>> seen;
  for (const Bond &b: bonds_) {
    if (b.begin < 0 || b.end < 0 || b.begin >= n || b.end >= n)
      throw DomainError("bond endpoint out of range");
    if (b.begin == b.end)
      throw DomainError("bond joins an atom to itself");
    auto key = std::minmax(b.begin, b.end);
    if (!seen.insert(key).second)
      throw DomainError("parallel bonds between atoms "
                        + std::to_string(key.first) + " and "
                        + std::to_string(key.second));
  }
  for (const Atom &a: atoms_) {
    if (a.link_label > 16)
      throw DomainError("link label outside 1..16");
    if (a.link_label != 0 && !a.is_dummy())
      throw DomainError("link label on a non-dummy atom");
  }
  build_topology();
}

int Molecule::bond_between(int a, int b) const {
  for (const Neighbor &nb: neighbors(a))
    if (nb.atom == b)
      return nb.bond;
  return -1;
}

int Molecule::bond_order_sum(int atom) const {
  int sum = 0;
  for (const Neighbor &nb: neighbors(atom))
    sum += valence_contribution(bonds_[nb.bond].order);
  return sum;
}

bool Molecule::atom_in_ring_of_size(int atom, int size) const {
  for (const auto &ring: rings_)
    if (static_cast<int>(ring.size()) == size
        && std::find(ring.begin(), ring.end(), atom) != ring.end())
      return true;
  return false;
}

void Molecule::build_topology() {
  const int n = num_atoms();
  const int m = num_bonds();

  offsets_.assign(n + 1, 0);
  for (const Bond &b: bonds_) {
    ++offsets_[b.begin + 1];
    ++offsets_[b.end + 1];
  }
  for (int i = 0; i < n; ++i)
    offsets_[i + 1] += offsets_[i];
  adjacency_.assign(2 * m, Neighbor { -1, -1 });
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int i = 0; i < m; ++i) {
    adjacency_[fill[bonds_[i].begin]++] = { bonds_[i].end, i };
    adjacency_[fill[bonds_[i].end]++] = { bonds_[i].begin, i };
  }

  // Bridges (iterative Tarjan). Every non-bridge bond lies on a cycle.
  bond_ring_.assign(m, 1);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  struct Frame {
    int atom;
    int parent_bond;
    int next;
  };
  std::vector<Frame> stack;
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0)
      continue;
    disc[root] = low[root] = timer++;
    stack.push_back({ root, -1, offsets_[root] });
    while (!stack.empty()) {
      Frame &f = stack.back();
      if (f.next < offsets_[f.atom + 1]) {
        const Neighbor nb = adjacency_[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (disc[nb.atom] < 0) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({ nb.atom, nb.bond, offsets_[nb.atom] });
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        Frame &parent = stack.back();
        low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
        if (low[done.atom] > disc[parent.atom])
          bond_ring_[done.parent_bond] = 0;
      }
    }
  }

  // Smallest cycle through each ring bond.
  rings_.clear();
  std::set<std::vector<int>> seen_bond_sets;
  std::vector<int> prev_atom(n), prev_bond(n);
  for (int bi = 0; bi < m; ++bi) {
    if (!bond_ring_[bi])
      continue;
    const int src = bonds_[bi].begin, dst = bonds_[bi].end;
    std::fill(prev_atom.begin(), prev_atom.end(), -2);
    prev_atom[src] = -1;
    std::deque<int> queue { src };
    while (!queue.empty() && prev_atom[dst] == -2) {
      const int a = queue.front();
      queue.pop_front();
      for (const Neighbor &nb: neighbors(a)) {
        if (nb.bond == bi || !bond_ring_[nb.bond] || prev_atom[nb.atom] != -2)
          continue;
        prev_atom[nb.atom] = a;
        prev_bond[nb.atom] = nb.bond;
        queue.push_back(nb.atom);
      }
    }
    if (prev_atom[dst] == -2)
      continue;
    std::vector<int> cycle, cycle_bonds { bi };
    for (int a = dst; a != -1; a = prev_atom[a]) {
      cycle.push_back(a);
      if (a != src)
        cycle_bonds.push_back(prev_bond[a]);
    }
    std::sort(cycle_bonds.begin(), cycle_bonds.end());
    if (seen_bond_sets.insert(cycle_bonds).second)
      rings_.push_back(std::move(cycle));
  }
  std::sort(rings_.begin(), rings_.end(), [](const auto &a, const auto &b) {
    if (a.size() != b.size())
      return a.size() < b.size();
    return a < b;
  });

  atom_ring_.assign(n, 0);
  for (const auto &ring: rings_)
    for (int a: ring)
      if (atom_ring_[a] < 255)
        ++atom_ring_[a];
}

std::vector<std::vector<int>> Molecule::components() const {
  const int n = num_atoms();
  std::vector<int> label(n, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0)
      continue;
    std::vector<int> comp;
    std::vector<int> stack { s };
    label[s] = static_cast<int>(out.size());
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      comp.push_back(a);
      for (const Neighbor &nb: neighbors(a)) {
        if (label[nb.atom] < 0) {
          label[nb.atom] = label[s];
          stack.push_back(nb.atom);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool Molecule::connected() const {
  return num_atoms() <= 1 || components().size() == 1;
}

Molecule Molecule::renumbered(std::span<const int> order) const {
  const int n = num_atoms();
  if (static_cast<int>(order.size()) != n)
    throw DomainError("renumbering must cover every atom");
  std::vector<int> inverse(n, -1);
  for (int i = 0; i < n; ++i) {
    if (order[i] < 0 || order[i] >= n || inverse[order[i]] >= 0)
      throw DomainError("renumbering is not a permutation");
    inverse[order[i]] = i;
  }
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (int i = 0; i < n; ++i)
    atoms.push_back(atoms_[order[i]]);
  std::vector<Bond> bonds = bonds_;
  for (Bond &b: bonds) {
    b.begin = inverse[b.begin];
    b.end = inverse[b.end];
    if (b.begin > b.end && b.direction == 0)
      std::swap(b.begin, b.end);
  }
  std::sort(bonds.begin(), bonds.end(), [](const Bond &x, const Bond &y) {
    return std::minmax(x.begin, x.end) < std::minmax(y.begin, y.end);
  });
  return Molecule(std::move(atoms), std::move(bonds), source_);
}

Molecule Molecule::subgraph(std::span<const int> atom_indices) const {
  std::vector<int> remap(num_atoms(), -1);
  std::vector<Atom> atoms;
  for (int i = 0; i < static_cast<int>(atom_indices.size()); ++i) {
    remap[atom_indices[i]] = i;
    atoms.push_back(atoms_[atom_indices[i]]);
  }
  std::vector<Bond> bonds;
  for (const Bond &b: bonds_) {
    if (remap[b.begin] < 0 || remap[b.end] < 0)
      continue;
    Bond nb = b;
    nb.begin = remap[b.begin];
    nb.end = remap[b.end];
    bonds.push_back(nb);
  }
  return Molecule(std::move(atoms), std::move(bonds));
}

}  // namespace molpipe
