#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "molpipe/molecule.h"

namespace molpipe {

// A compiled SMARTS query. Supports the subset used by the shipped rule and
// key tables: element symbols (aliphatic/aromatic), *, a, A, #n, Dn, Hn, Xn,
// vn, R/Rn, r/rn, +n/-n, isotopes, recursive $(...), logical ! & , ;
// branches and ring-closure digits; bonds - = # : ~ @ with the same logical
// operators. Unspecified bonds mean "single or aromatic".
class SmartsPattern {
 public:
  // Throws SyntaxError.
  static SmartsPattern compile(std::string_view text);

  SmartsPattern();
  SmartsPattern(const SmartsPattern &);
  SmartsPattern(SmartsPattern &&) noexcept;
  SmartsPattern &operator=(const SmartsPattern &);
  SmartsPattern &operator=(SmartsPattern &&) noexcept;
  ~SmartsPattern();

  const std::string &text() const noexcept;
  int num_atoms() const noexcept;

  // True if the pattern embeds with its first atom mapped onto `atom`.
  bool matches_at(const Molecule &mol, int atom) const;
  bool matches(const Molecule &mol) const;
  // Distinct embeddings, deduplicated by matched atom set.
  int count_unique(const Molecule &mol, int limit = 1 << 20) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace molpipe
