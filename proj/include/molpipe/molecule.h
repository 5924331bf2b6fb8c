#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace molpipe {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kQuadruple = 4,
  kAromatic = 5,
};

// Contribution of a bond to an atom's valence; aromatic bonds count as one
// (the extra pi electron is accounted for separately).
int valence_contribution(BondOrder order) noexcept;

struct Atom {
  std::uint8_t element = 6;  // 0 is the dummy atom '*'
  bool aromatic = false;
  std::int8_t formal_charge = 0;
  // Total attached hydrogens: bracket count, or the implicit count for
  // organic-subset atoms as resolved at parse time.
  std::uint8_t hydrogens = 0;
  std::uint16_t isotope = 0;  // 0 = natural abundance
  // BRICS link label 1..16 on dummy atoms; 0 otherwise.
  std::uint8_t link_label = 0;
  std::uint16_t atom_map = 0;
  // Tetrahedral/extended chirality marker exactly as written ("@", "@@",
  // "@TH1", ...). Preserved, not interpreted.
  std::string chirality;

  bool is_dummy() const noexcept { return element == 0; }
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::kSingle;
  // '/' or '\\' as written, 0 when absent. Preserved, not interpreted.
  char direction = 0;

  int other(int atom) const noexcept { return atom == begin ? end : begin; }
};

struct Neighbor {
  int atom;
  int bond;
};

// Attributed molecular graph. Immutable once built; the constructor checks
// the structural invariants (endpoint range, no self loops, no parallel
// bonds) and precomputes adjacency and ring membership.
class Molecule {
 public:
  Molecule() = default;
  Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds,
           std::string source_text = {});

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::span<const Bond> bonds() const noexcept { return bonds_; }
  const Atom &atom(int i) const { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  int num_atoms() const noexcept { return static_cast<int>(atoms_.size()); }
  int num_bonds() const noexcept { return static_cast<int>(bonds_.size()); }
  bool empty() const noexcept { return atoms_.empty(); }

  const std::string &source_text() const noexcept { return source_; }

  std::span<const Neighbor> neighbors(int atom) const {
    return { adjacency_.data() + offsets_[atom],
             adjacency_.data() + offsets_[atom + 1] };
  }
  int degree(int atom) const noexcept {
    return offsets_[atom + 1] - offsets_[atom];
  }
  // Index of the bond joining a and b, or -1.
  int bond_between(int a, int b) const;

  // Sum of valence contributions of incident bonds (no hydrogens).
  int bond_order_sum(int atom) const;

  bool bond_in_ring(int bond) const { return bond_ring_[bond] != 0; }
  bool atom_in_ring(int atom) const { return atom_ring_[atom] != 0; }
  // Number of smallest-cycle rings (see rings()) containing the atom.
  int ring_count(int atom) const { return atom_ring_[atom]; }

  // One smallest cycle per ring bond, deduplicated, as ordered atom cycles.
  // Sorted by size then content; stable for a given atom numbering.
  const std::vector<std::vector<int>> &rings() const noexcept {
    return rings_;
  }
  bool atom_in_ring_of_size(int atom, int size) const;

  // Connected components as sorted atom lists, ordered by smallest member.
  std::vector<std::vector<int>> components() const;
  bool connected() const;

  // A copy whose atom i is this molecule's atom order[i]. order must be a
  // permutation of [0, num_atoms).
  Molecule renumbered(std::span<const int> order) const;
  // The induced subgraph on the given atoms (new indices follow the span).
  Molecule subgraph(std::span<const int> atom_indices) const;

 private:
  void build_topology();

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::string source_;

  std::vector<int> offsets_ { 0 };
  std::vector<Neighbor> adjacency_;
  std::vector<std::uint8_t> bond_ring_;
  std::vector<std::uint8_t> atom_ring_;
  std::vector<std::vector<int>> rings_;
};

}  // namespace molpipe
