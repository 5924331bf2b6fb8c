#pragma once

#include <span>
#include <string_view>

#include "molpipe/brics.h"
#include "molpipe/molecule.h"

namespace molpipe {

// Rebuilds the parent from a fragment set. With recorded links the original
// bonds are restored exactly; without them (links empty) the dummies are
// paired by label compatibility.
Molecule rejoin(const FragmentSet &fs,
                const BricsRuleTable &rules = BricsRuleTable::builtin());

// Provenance-free rejoin: finds every pairing of compatible dummy atoms that
// joins the fragments into one tree. Throws UnpairedLabelError when no
// pairing exists and AmbiguityError when pairings disagree on the result.
Molecule rejoin(std::span<const Molecule> fragments,
                const BricsRuleTable &rules = BricsRuleTable::builtin());

// Parses a dot-joined fragment string and rejoins it without provenance.
Molecule rejoin_smiles(std::string_view dotted,
                       const BricsRuleTable &rules = BricsRuleTable::builtin());

// Replaces every dummy atom by an aliphatic carbon whose hydrogens complete
// valence 4.
Molecule carbon_cap(const Molecule &fragment);

}  // namespace molpipe
