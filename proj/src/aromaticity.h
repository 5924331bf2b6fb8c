#pragma once

#include <vector>

#include "molpipe/molecule.h"

namespace molpipe::detail {

// Marks Kekule rings whose pi-electron count is 4n+2 as aromatic. Rings that
// already contain aromatic atoms are left alone.
Molecule perceive_aromaticity(const Molecule &mol);

// Aromatic atoms that still need a pi double bond and cannot be given one by
// any Kekule assignment. Empty when the aromatic system is consistent.
std::vector<int> unkekulizable_atoms(const Molecule &mol);

// Aromatic atoms whose valence leaves room for exactly one more bond, i.e.
// atoms that take a double bond in a Kekule structure.
bool needs_pi_bond(const Molecule &mol, int atom);

}  // namespace molpipe::detail
