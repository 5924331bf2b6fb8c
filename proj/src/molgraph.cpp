#include "molpipe/molgraph.h"

#include <algorithm>

#include "aromaticity.h"
#include "molpipe/element.h"
#include "molpipe/error.h"

namespace molpipe {

ValidityReport validate(const Molecule &mol) {
  ValidityReport report;
  auto fail = [&](int atom, std::string reason) {
    report.failures.push_back({ atom, std::move(reason) });
  };

  for (int a = 0; a < mol.num_atoms(); ++a) {
    const Atom &atom = mol.atom(a);
    if (atom.is_dummy())
      continue;
    const ValenceSet allowed =
        allowed_valences(atom.element, atom.formal_charge);
    const int valence = mol.bond_order_sum(a) + atom.hydrogens;
    if (allowed.checked && valence > allowed.max()) {
      fail(a, std::string(element(atom.element).symbol) + " valence "
                  + std::to_string(valence) + " exceeds "
                  + std::to_string(allowed.max()));
    }
    if (atom.aromatic && !mol.atom_in_ring(a))
      fail(a, "aromatic atom outside a ring");
  }

  for (int b = 0; b < mol.num_bonds(); ++b) {
    const Bond &bond = mol.bond(b);
    if (bond.order != BondOrder::kAromatic)
      continue;
    if (!mol.atom(bond.begin).aromatic || !mol.atom(bond.end).aromatic)
      fail(bond.begin, "aromatic bond to a non-aromatic atom");
    else if (!mol.bond_in_ring(b))
      fail(bond.begin, "aromatic bond outside a ring");
  }

  if (report.failures.empty()) {
    for (int a: detail::unkekulizable_atoms(mol))
      fail(a, "aromatic system has no Kekule structure");
  }

  std::sort(report.failures.begin(), report.failures.end(),
            [](const auto &x, const auto &y) { return x.atom < y.atom; });
  report.valid = report.failures.empty();
  return report;
}

bool is_valid_smiles(std::string_view text) {
  try {
    return validate(parse_smiles(text)).valid;
  } catch (const SyntaxError &) {
    return false;
  }
}

double molecular_weight(const Molecule &mol) {
  const double hydrogen = element(1).weight;
  double total = 0.0;
  for (const Atom &atom: mol.atoms()) {
    if (atom.is_dummy())
      continue;
    total += atom.isotope != 0 ? static_cast<double>(atom.isotope)
                               : element(atom.element).weight;
    total += atom.hydrogens * hydrogen;
  }
  return total;
}

}  // namespace molpipe
