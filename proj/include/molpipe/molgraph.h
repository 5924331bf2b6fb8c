#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "molpipe/molecule.h"
#include "molpipe/smiles.h"

namespace molpipe {

struct ValidityFailure {
  int atom;
  std::string reason;
};

struct ValidityReport {
  bool valid = true;
  std::vector<ValidityFailure> failures;
};

// Valence table check for every non-dummy atom, aromatic atoms must sit in
// rings and admit a Kekule assignment, aromatic bonds must join aromatic
// ring atoms. Ring closures are matched by construction (the parser
// rejects unmatched ones).
ValidityReport validate(const Molecule &mol);

// Parses and validates; false for any syntax error.
bool is_valid_smiles(std::string_view text);

// Sum of standard atomic weights including attached hydrogens. Dummy atoms
// weigh nothing; isotope-labelled atoms use their mass number.
double molecular_weight(const Molecule &mol);

}  // namespace molpipe
