#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "molpipe/molecule.h"
#include "molpipe/smarts.h"

namespace molpipe {

struct BricsRule {
  int label = 0;
  SmartsPattern environment;
  // Partners for single-bond cuts, in precedence order.
  std::vector<int> partners;
  // Labels this environment pairs with across a double bond. Parsed and kept,
  // never used for cutting (only single bonds are cleaved).
  std::vector<int> double_partners;
};

class BricsRuleTable {
 public:
  // Parses "label<TAB>smarts<TAB>partners" lines; '#' starts a comment.
  // Throws FormatError.
  static BricsRuleTable parse(std::string_view text);
  // The shipped table.
  static const BricsRuleTable &builtin();

  const std::vector<BricsRule> &rules() const noexcept { return rules_; }
  const BricsRule *find(int label) const;

  // Precedence of the (a, b) single-bond pair, lower wins; -1 when the pair
  // is not permitted.
  int pair_rank(int a, int b) const;
  bool compatible(int a, int b) const { return pair_rank(a, b) >= 0; }

  // Labels whose environment matches at `atom`, ascending.
  std::vector<int> labels_at(const Molecule &mol, int atom) const;

 private:
  std::vector<BricsRule> rules_;
  std::vector<int> rank_;  // 17 x 17
};

struct BricsBond {
  int bond_index = -1;
  // labels.first belongs to bond.begin, labels.second to bond.end.
  std::pair<int, int> labels;
};

// Every single acyclic bond whose two ends match a permitted label pair,
// ordered by bond index. Throws DomainError for molecules with dummy atoms.
std::vector<BricsBond> find_brics_bonds(
    const Molecule &mol, const BricsRuleTable &rules = BricsRuleTable::builtin());

// Adaptive fragment cap: L when L < k, else min(L, ceil(ceil(L/k)^alpha)).
// Throws DomainError unless L >= 1, k >= 1 and alpha > 0 (all finite).
std::int64_t max_fragments(std::int64_t length, double k, double alpha);

constexpr double kDefaultAlpha = 1.5;
// Used when no molecule library is available to measure k.
constexpr double kFallbackK = 48.0;

struct FragmentParams {
  double k = kFallbackK;
  double alpha = kDefaultAlpha;
  std::uint64_t seed = 0;
};

// One cut, recorded so the parent can be rebuilt exactly.
struct FragmentLink {
  std::pair<int, int> labels;
  int fragment_a = -1;  // fragment holding the dummy labelled labels.first
  int dummy_a = -1;
  int fragment_b = -1;
  int dummy_b = -1;
};

struct FragmentSet {
  // Each fragment is numbered in its own canonical order; fragments are
  // sorted by canonical SMILES.
  std::vector<Molecule> fragments;
  std::vector<std::string> smiles;
  std::string parent_canonical;
  // Cut bonds, indexed against the parent's canonical numbering.
  std::vector<BricsBond> cleaved;
  std::vector<FragmentLink> links;
  std::int64_t cap = 1;
  std::int64_t eligible = 0;
  std::uint64_t seed = 0;

  std::string joined() const;
};

// Cuts up to cap - 1 BRICS bonds, inserting a labelled dummy on each side.
// When more bonds qualify than the cap allows, a seeded uniform sample picks
// the cuts. L is the length of the parent's canonical SMILES.
// Throws DomainError for disconnected molecules or molecules with dummies.
FragmentSet fragment(const Molecule &mol, const FragmentParams &params,
                     const BricsRuleTable &rules = BricsRuleTable::builtin());

}  // namespace molpipe
