#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "molpipe/element.h"
#include "molpipe/error.h"
#include "molpipe/smiles.h"

namespace molpipe {
namespace {

int bond_code(BondOrder order) {
  return static_cast<int>(order);
}

// Replaces each atom's class with the dense rank of its key.
template <class Key>
int densify(std::vector<Key> &keys, std::vector<int> &classes) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  int cls = -1;
  for (int i = 0; i < n; ++i) {
    if (i == 0 || keys[idx[i - 1]] < keys[idx[i]])
      ++cls;
    classes[idx[i]] = cls;
  }
  return cls + 1;
}

int refine(const Molecule &mol, std::vector<int> &classes, int count) {
  const int n = mol.num_atoms();
  using Key = std::pair<int, std::vector<std::pair<int, int>>>;
  std::vector<Key> keys(n);
  while (true) {
    for (int a = 0; a < n; ++a) {
      keys[a].first = classes[a];
      auto &env = keys[a].second;
      env.clear();
      for (const Neighbor &nb: mol.neighbors(a))
        env.emplace_back(classes[nb.atom], bond_code(mol.bond(nb.bond).order));
      std::sort(env.begin(), env.end());
    }
    const int next = densify(keys, classes);
    if (next == count)
      return count;
    count = next;
  }
}

std::string bond_symbol(const Molecule &mol, int bond) {
  const Bond &b = mol.bond(bond);
  const bool both_aromatic =
      mol.atom(b.begin).aromatic && mol.atom(b.end).aromatic;
  switch (b.order) {
  case BondOrder::kSingle:
    return both_aromatic ? "-" : "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kQuadruple:
    return "$";
  case BondOrder::kAromatic:
    return both_aromatic ? "" : ":";
  }
  return "";
}

void append_atom(const Molecule &mol, int a, std::string &out) {
  const Atom &atom = mol.atom(a);
  if (atom.is_dummy()) {
    if (atom.link_label == 0 && atom.isotope == 0 && atom.hydrogens == 0
        && atom.formal_charge == 0) {
      out += '*';
      return;
    }
  } else if (is_organic_subset(atom.element) && atom.formal_charge == 0
             && atom.isotope == 0
             && (!atom.aromatic
                 || (atom.element != 9 && atom.element != 17
                     && atom.element != 35 && atom.element != 53))) {
    const int implicit = organic_implicit_hydrogens(
        atom.element, atom.aromatic, mol.bond_order_sum(a));
    if (implicit == atom.hydrogens) {
      std::string sym(element(atom.element).symbol);
      if (atom.aromatic)
        sym[0] = static_cast<char>(std::tolower(sym[0]));
      out += sym;
      return;
    }
  }

  out += '[';
  if (atom.is_dummy() && atom.link_label != 0)
    out += std::to_string(atom.link_label);
  else if (atom.isotope != 0)
    out += std::to_string(atom.isotope);
  std::string sym(element(atom.element).symbol);
  if (atom.aromatic)
    for (char &ch: sym)
      ch = static_cast<char>(std::tolower(ch));
  out += sym;
  if (atom.hydrogens > 0) {
    out += 'H';
    if (atom.hydrogens > 1)
      out += std::to_string(atom.hydrogens);
  }
  if (atom.formal_charge != 0) {
    out += atom.formal_charge > 0 ? '+' : '-';
    const int mag = std::abs(atom.formal_charge);
    if (mag > 1)
      out += std::to_string(mag);
  }
  out += ']';
}

class ComponentWriter {
 public:
  ComponentWriter(const Molecule &mol, std::span<const int> ranks)
      : mol_(mol), ranks_(ranks), dfs_index_(mol.num_atoms(), -1),
        children_(mol.num_atoms()), closures_(mol.num_atoms()),
        bond_used_(mol.num_bonds(), 0), digit_of_(mol.num_bonds(), -1) { }

  void write(int start, std::string &out, std::vector<int> &order) {
    discover(start, -1);
    emit(start, out, order);
  }

 private:
  void discover(int a, int parent_bond) {
    dfs_index_[a] = counter_++;
    std::vector<Neighbor> nbrs(mol_.neighbors(a).begin(),
                               mol_.neighbors(a).end());
    std::sort(nbrs.begin(), nbrs.end(), [&](const Neighbor &x,
                                            const Neighbor &y) {
      return ranks_[x.atom] < ranks_[y.atom];
    });
    for (const Neighbor &nb: nbrs) {
      if (nb.bond == parent_bond || bond_used_[nb.bond])
        continue;
      bond_used_[nb.bond] = 1;
      if (dfs_index_[nb.atom] >= 0) {
        closures_[a].push_back(nb.bond);
        closures_[nb.atom].push_back(nb.bond);
      } else {
        children_[a].push_back(nb);
        discover(nb.atom, nb.bond);
      }
    }
  }

  int take_digit() {
    for (int d = 1; d < static_cast<int>(digit_busy_.size()); ++d) {
      if (!digit_busy_[d]) {
        digit_busy_[d] = true;
        return d;
      }
    }
    throw DomainError("more than 99 simultaneously open rings");
  }

  static void append_digit(int d, std::string &out) {
    if (d < 10) {
      out += static_cast<char>('0' + d);
    } else {
      out += '%';
      out += std::to_string(d);
    }
  }

  void emit(int a, std::string &out, std::vector<int> &order) {
    append_atom(mol_, a, out);
    order.push_back(a);

    auto &closures = closures_[a];
    std::sort(closures.begin(), closures.end(), [&](int x, int y) {
      return dfs_index_[mol_.bond(x).other(a)]
             < dfs_index_[mol_.bond(y).other(a)];
    });
    std::vector<int> release;
    for (int bond: closures) {
      const int partner = mol_.bond(bond).other(a);
      if (dfs_index_[partner] < dfs_index_[a]) {
        append_digit(digit_of_[bond], out);
        release.push_back(digit_of_[bond]);
      } else {
        const int d = take_digit();
        digit_of_[bond] = d;
        out += bond_symbol(mol_, bond);
        append_digit(d, out);
      }
    }
    for (int d: release)
      digit_busy_[d] = false;

    const auto &kids = children_[a];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool branch = i + 1 < kids.size();
      if (branch)
        out += '(';
      out += bond_symbol(mol_, kids[i].bond);
      emit(kids[i].atom, out, order);
      if (branch)
        out += ')';
    }
  }

  const Molecule &mol_;
  std::span<const int> ranks_;
  std::vector<int> dfs_index_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<int>> closures_;
  std::vector<char> bond_used_;
  std::vector<int> digit_of_;
  std::vector<bool> digit_busy_ = std::vector<bool>(100, false);
  int counter_ = 0;
};

struct ComponentText {
  std::string smiles;
  std::vector<int> order;
  int min_rank;
};

std::vector<ComponentText> write_components(const Molecule &mol,
                                            std::span<const int> ranks) {
  std::vector<ComponentText> parts;
  for (const auto &comp: mol.components()) {
    int start = comp.front();
    for (int a: comp)
      if (ranks[a] < ranks[start])
        start = a;
    ComponentText part;
    part.min_rank = ranks[start];
    ComponentWriter(mol, ranks).write(start, part.smiles, part.order);
    parts.push_back(std::move(part));
  }
  return parts;
}

CanonicalForm join(std::vector<ComponentText> &parts) {
  CanonicalForm form;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0)
      form.smiles += '.';
    form.smiles += parts[i].smiles;
    form.atom_order.insert(form.atom_order.end(), parts[i].order.begin(),
                           parts[i].order.end());
  }
  return form;
}

}  // namespace

std::vector<int> canonical_ranks(const Molecule &mol) {
  const int n = mol.num_atoms();
  using Invariant = std::tuple<int, int, int, int, int, int, int, int>;
  std::vector<Invariant> inv(n);
  for (int a = 0; a < n; ++a) {
    const Atom &atom = mol.atom(a);
    inv[a] = { mol.degree(a),     atom.element,       atom.isotope,
               atom.link_label,   atom.aromatic ? 1 : 0,
               atom.formal_charge, atom.hydrogens,
               mol.atom_in_ring(a) ? 1 : 0 };
  }
  std::vector<int> classes(n, 0);
  int count = densify(inv, classes);
  count = refine(mol, classes, count);

  while (count < n) {
    // Break the first tie: the lowest-indexed member of the lowest tied
    // class is promoted ahead of its class mates.
    std::vector<int> size(count, 0);
    for (int c: classes)
      ++size[c];
    int target = 0;
    while (size[target] < 2)
      ++target;
    int chosen = -1;
    for (int a = 0; a < n && chosen < 0; ++a)
      if (classes[a] == target)
        chosen = a;
    std::vector<std::pair<int, int>> keys(n);
    for (int a = 0; a < n; ++a)
      keys[a] = { classes[a], a == chosen ? 0 : 1 };
    count = densify(keys, classes);
    count = refine(mol, classes, count);
  }
  return classes;
}

CanonicalForm write_smiles(const Molecule &mol, std::span<const int> ranks) {
  if (static_cast<int>(ranks.size()) != mol.num_atoms())
    throw DomainError("rank vector does not match atom count");
  auto parts = write_components(mol, ranks);
  std::sort(parts.begin(), parts.end(),
            [](const auto &x, const auto &y) { return x.min_rank < y.min_rank; });
  return join(parts);
}

CanonicalForm canonical_form(const Molecule &mol) {
  const std::vector<int> ranks = canonical_ranks(mol);
  auto parts = write_components(mol, ranks);
  std::sort(parts.begin(), parts.end(), [](const auto &x, const auto &y) {
    return std::tie(x.smiles, x.min_rank) < std::tie(y.smiles, y.min_rank);
  });
  return join(parts);
}

std::string canonical_smiles(const Molecule &mol) {
  return canonical_form(mol).smiles;
}

std::string random_smiles(const Molecule &mol, std::uint64_t seed) {
  std::vector<int> ranks(mol.num_atoms());
  std::iota(ranks.begin(), ranks.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(ranks.begin(), ranks.end(), rng);
  return write_smiles(mol, ranks).smiles;
}

}  // namespace molpipe
