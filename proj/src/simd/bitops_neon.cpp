#include <arm_neon.h>

#include "molpipe/simd/bitops.h"

namespace molpipe::simd::neon {
namespace {

inline std::uint64_t count2(uint64x2_t v) {
  return vaddlvq_u8(vcntq_u8(vreinterpretq_u8_u64(v)));
}

}  // namespace

std::uint64_t popcount(const std::uint64_t *words, std::size_t n) {
  std::uint64_t total = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    total += count2(vld1q_u64(words + i));
  for (; i < n; ++i)
    total += static_cast<std::uint64_t>(__builtin_popcountll(words[i]));
  return total;
}

BitCounts and_or(const std::uint64_t *a, const std::uint64_t *b,
                 std::size_t n) {
  BitCounts c;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t va = vld1q_u64(a + i);
    const uint64x2_t vb = vld1q_u64(b + i);
    c.both += count2(vandq_u64(va, vb));
    c.either += count2(vorrq_u64(va, vb));
  }
  for (; i < n; ++i) {
    c.both += static_cast<std::uint64_t>(__builtin_popcountll(a[i] & b[i]));
    c.either += static_cast<std::uint64_t>(__builtin_popcountll(a[i] | b[i]));
  }
  return c;
}

}  // namespace molpipe::simd::neon
