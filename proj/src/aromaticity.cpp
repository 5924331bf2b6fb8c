#include "aromaticity.h"

#include <algorithm>
#include <functional>
#include <iterator>

#include "molpipe/element.h"

namespace molpipe::detail {
namespace {

bool is_pnictogen(int z) {
  return z == 7 || z == 15 || z == 33;
}

bool is_chalcogen(int z) {
  return z == 8 || z == 16 || z == 34 || z == 52;
}

// Pi electrons an atom donates to a ring, or -1 when the atom cannot take
// part in an aromatic ring in its current Kekule form.
int pi_electrons(const Molecule &mol, int a) {
  const Atom &atom = mol.atom(a);
  int doubles = 0;
  int double_bond = -1;
  for (const Neighbor &nb: mol.neighbors(a)) {
    const BondOrder order = mol.bond(nb.bond).order;
    if (order == BondOrder::kTriple || order == BondOrder::kQuadruple
        || order == BondOrder::kAromatic)
      return -1;
    if (order == BondOrder::kDouble) {
      ++doubles;
      double_bond = nb.bond;
    }
  }
  if (doubles > 1)
    return -1;
  if (doubles == 1) {
    if (mol.bond_in_ring(double_bond))
      return 1;
    const int partner = mol.bond(double_bond).other(a);
    const int pz = mol.atom(partner).element;
    if (atom.element == 6 && (pz == 7 || pz == 8 || pz == 16))
      return 0;
    return -1;
  }
  if (atom.formal_charge != 0)
    return -1;
  if (is_pnictogen(atom.element) && mol.degree(a) + atom.hydrogens == 3)
    return 2;
  if (is_chalcogen(atom.element) && mol.degree(a) == 2
      && atom.hydrogens == 0)
    return 2;
  return -1;
}

struct Matcher {
  const Molecule &mol;
  const std::vector<char> &needs;
  std::vector<int> mate;
  long budget = 200000;

  int free_partners(int a) const {
    int count = 0;
    for (const Neighbor &nb: mol.neighbors(a))
      if (needs[nb.atom] && mate[nb.atom] < 0
          && mol.bond(nb.bond).order == BondOrder::kAromatic)
        ++count;
    return count;
  }

  bool solve() {
    if (--budget < 0)
      return false;
    int pick = -1, best = 1 << 30;
    for (int a = 0; a < mol.num_atoms(); ++a) {
      if (!needs[a] || mate[a] >= 0)
        continue;
      const int c = free_partners(a);
      if (c < best) {
        best = c;
        pick = a;
      }
    }
    if (pick < 0)
      return true;
    if (best == 0)
      return false;
    for (const Neighbor &nb: mol.neighbors(pick)) {
      if (!needs[nb.atom] || mate[nb.atom] >= 0
          || mol.bond(nb.bond).order != BondOrder::kAromatic)
        continue;
      mate[pick] = nb.atom;
      mate[nb.atom] = pick;
      if (solve())
        return true;
      mate[pick] = mate[nb.atom] = -1;
    }
    return false;
  }
};

}  // namespace

bool needs_pi_bond(const Molecule &mol, int a) {
  const Atom &atom = mol.atom(a);
  if (!atom.aromatic || atom.is_dummy())
    return false;
  const int val = mol.bond_order_sum(a) + atom.hydrogens;
  const ValenceSet allowed = allowed_valences(atom.element, atom.formal_charge);
  if (!allowed.checked)
    return false;
  const int target = allowed.at_least(val);
  return target > val;
}

Molecule perceive_aromaticity(const Molecule &mol) {
  const auto &rings = mol.rings();
  if (rings.empty())
    return mol;

  std::vector<int> electrons(mol.num_atoms(), -1);
  for (int a = 0; a < mol.num_atoms(); ++a)
    if (!mol.atom(a).aromatic && mol.atom_in_ring(a))
      electrons[a] = pi_electrons(mol, a);

  // Rings whose every atom can donate; only these take part.
  std::vector<int> candidates;
  for (int r = 0; r < static_cast<int>(rings.size()); ++r) {
    const bool ok = std::all_of(rings[r].begin(), rings[r].end(),
                                [&](int a) { return electrons[a] >= 0; });
    if (ok)
      candidates.push_back(r);
  }
  if (candidates.empty())
    return mol;

  const int nc = static_cast<int>(candidates.size());
  std::vector<std::vector<int>> ring_bonds(nc);
  for (int i = 0; i < nc; ++i) {
    const auto &ring = rings[candidates[i]];
    const int size = static_cast<int>(ring.size());
    for (int k = 0; k < size; ++k)
      ring_bonds[i].push_back(mol.bond_between(ring[k], ring[(k + 1) % size]));
    std::sort(ring_bonds[i].begin(), ring_bonds[i].end());
  }
  std::vector<std::vector<int>> fused(nc);
  for (int i = 0; i < nc; ++i) {
    for (int j = i + 1; j < nc; ++j) {
      std::vector<int> shared;
      std::set_intersection(ring_bonds[i].begin(), ring_bonds[i].end(),
                            ring_bonds[j].begin(), ring_bonds[j].end(),
                            std::back_inserter(shared));
      if (!shared.empty()) {
        fused[i].push_back(j);
        fused[j].push_back(i);
      }
    }
  }

  std::vector<char> aromatic_atom(mol.num_atoms(), 0);
  std::vector<char> aromatic_bond(mol.num_bonds(), 0);
  bool changed = false;

  auto try_subset = [&](const std::vector<int> &subset) {
    std::vector<int> atoms;
    for (int i: subset)
      atoms.insert(atoms.end(), rings[candidates[i]].begin(),
                   rings[candidates[i]].end());
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    int total = 0;
    for (int a: atoms)
      total += electrons[a];
    if (total % 4 != 2)
      return;
    changed = true;
    for (int a: atoms)
      aromatic_atom[a] = 1;
    for (int i: subset)
      for (int b: ring_bonds[i])
        aromatic_bond[b] = 1;
  };

  // Connected subsets of fused candidate rings, each enumerated once from
  // its lowest member.
  std::vector<int> subset;
  std::vector<char> in_subset(nc, 0);
  const int max_subset = 6;
  std::function<void(int, std::vector<int> &)> grow =
      [&](int root, std::vector<int> &frontier) {
        try_subset(subset);
        if (static_cast<int>(subset.size()) >= max_subset)
          return;
        for (std::size_t fi = 0; fi < frontier.size(); ++fi) {
          const int next = frontier[fi];
          std::vector<int> next_frontier(frontier.begin() + fi + 1,
                                         frontier.end());
          // Only rings not already adjacent to the subset join here.
          for (int f: fused[next]) {
            if (f <= root || in_subset[f])
              continue;
            bool adjacent = false;
            for (int member: subset)
              adjacent = adjacent
                         || std::find(fused[member].begin(),
                                      fused[member].end(), f)
                                != fused[member].end();
            if (!adjacent)
              next_frontier.push_back(f);
          }
          subset.push_back(next);
          in_subset[next] = 1;
          grow(root, next_frontier);
          in_subset[next] = 0;
          subset.pop_back();
        }
      };
  for (int root = 0; root < nc; ++root) {
    subset = { root };
    in_subset[root] = 1;
    std::vector<int> frontier;
    for (int f: fused[root])
      if (f > root)
        frontier.push_back(f);
    grow(root, frontier);
    in_subset[root] = 0;
  }
  if (!changed)
    return mol;

  std::vector<Atom> atoms(mol.atoms().begin(), mol.atoms().end());
  std::vector<Bond> bonds(mol.bonds().begin(), mol.bonds().end());
  for (int i = 0; i < mol.num_atoms(); ++i)
    if (aromatic_atom[i])
      atoms[i].aromatic = true;
  for (int i = 0; i < mol.num_bonds(); ++i)
    if (aromatic_bond[i])
      bonds[i].order = BondOrder::kAromatic;
  return Molecule(std::move(atoms), std::move(bonds), mol.source_text());
}

std::vector<int> unkekulizable_atoms(const Molecule &mol) {
  std::vector<char> needs(mol.num_atoms(), 0);
  bool any = false;
  for (int a = 0; a < mol.num_atoms(); ++a) {
    needs[a] = needs_pi_bond(mol, a) ? 1 : 0;
    any = any || needs[a];
  }
  if (!any)
    return {};
  Matcher m { mol, needs, std::vector<int>(mol.num_atoms(), -1) };
  if (m.solve())
    return {};
  std::vector<int> out;
  for (int a = 0; a < mol.num_atoms(); ++a)
    if (needs[a])
      out.push_back(a);
  return out;
}

}  // namespace molpipe::detail
