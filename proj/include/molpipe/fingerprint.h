#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "molpipe/molecule.h"

namespace molpipe {

enum class FingerprintScheme { kMorgan, kPath, kKeys };

std::string_view to_string(FingerprintScheme s);
FingerprintScheme parse_fingerprint_scheme(std::string_view text);

constexpr int kDefaultFingerprintWidth = 2048;

class FingerprintBitset {
 public:
  // Throws DomainError unless width is a positive power of two.
  FingerprintBitset(FingerprintScheme scheme, int width);

  FingerprintScheme scheme() const noexcept { return scheme_; }
  int width() const noexcept { return width_; }
  const std::vector<std::uint64_t> &words() const noexcept { return words_; }

  void set(std::uint64_t bit);
  bool test(int bit) const;
  int count() const;

  friend bool operator==(const FingerprintBitset &,
                         const FingerprintBitset &) = default;

 private:
  FingerprintScheme scheme_;
  int width_;
  std::vector<std::uint64_t> words_;
};

// morgan: circular environments of radius 0..2 hashed into the width.
// path:   every simple linear path of 1..7 bonds, one hashed bit per path.
// keys:   one bit per entry of the structural key table.
// Throws DomainError for molecules that fail validate() and for key tables
// longer than the width.
FingerprintBitset fingerprint(const Molecule &mol, FingerprintScheme scheme,
                              int width = kDefaultFingerprintWidth);

// |a & b| / |a | b|, 1.0 when both are empty. Throws DomainError when scheme
// or width differ.
double tanimoto(const FingerprintBitset &a, const FingerprintBitset &b);

// Number of entries in the shipped structural key table.
int structural_key_count();

}  // namespace molpipe
