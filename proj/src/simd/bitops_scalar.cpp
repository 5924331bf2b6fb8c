#include <bit>

#include "molpipe/simd/bitops.h"

namespace molpipe::simd::scalar {

std::uint64_t popcount(const std::uint64_t *words, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i)
    total += static_cast<std::uint64_t>(std::popcount(words[i]));
  return total;
}

BitCounts and_or(const std::uint64_t *a, const std::uint64_t *b,
                 std::size_t n) {
  BitCounts c;
  for (std::size_t i = 0; i < n; ++i) {
    c.both += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
    c.either += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
  }
  return c;
}

}  // namespace molpipe::simd::scalar
