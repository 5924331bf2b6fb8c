#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molpipe/molecule.h"

namespace molpipe {

// Parses organic-subset and bracket atoms, charges, isotopes, ring closures
// (digits and %nn), branches, '.' components and stereo markers. Kekule
// rings that satisfy 4n+2 are converted to aromatic form so that Kekule and
// aromatic spellings of the same molecule produce the same graph.
//
// Throws SyntaxError with the byte offset of the problem. Valence problems
// are not syntax errors; see validate().
Molecule parse_smiles(std::string_view text);

// Canonical atom ranks: a permutation of [0, n) that depends only on the
// attributed graph (up to automorphism).
std::vector<int> canonical_ranks(const Molecule &mol);

struct CanonicalForm {
  std::string smiles;
  // atom_order[i] is the index (in the input molecule) of the i-th atom
  // written; parsing `smiles` yields atoms in this order.
  std::vector<int> atom_order;
};

CanonicalForm canonical_form(const Molecule &mol);
std::string canonical_smiles(const Molecule &mol);

// Writes the molecule using the given ranks to order traversal: each
// component starts at its lowest-ranked atom and branches are visited in
// ascending rank. Stereo annotations are not written.
CanonicalForm write_smiles(const Molecule &mol, std::span<const int> ranks);

// A valid but randomly ordered serialization of the same graph.
std::string random_smiles(const Molecule &mol, std::uint64_t seed);

// Hydrogen count implied for an unbracketed organic-subset atom.
int organic_implicit_hydrogens(int element, bool aromatic, int bond_sum);

}  // namespace molpipe
