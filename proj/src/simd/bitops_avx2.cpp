#include <immintrin.h>

#include "molpipe/simd/bitops.h"

namespace molpipe::simd::avx2 {
namespace {

// Nibble lookup popcount: per-byte counts via two pshufb lookups, then
// horizontal byte sums with sad against zero.
inline __m256i byte_counts(__m256i v) {
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2,
                                       3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1, 2,
                                       2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lut, lo),
                         _mm256_shuffle_epi8(lut, hi));
}

inline __m256i lane_sums(__m256i v) {
  return _mm256_sad_epu8(byte_counts(v), _mm256_setzero_si256());
}

inline std::uint64_t reduce(__m256i acc) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i *>(lanes), acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

inline std::uint64_t tail_count(std::uint64_t x) {
  return static_cast<std::uint64_t>(__builtin_popcountll(x));
}

}  // namespace

std::uint64_t popcount(const std::uint64_t *words, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v =
        _mm256_loadu_si256(reinterpret_cast<const __m256i *>(words + i));
    acc = _mm256_add_epi64(acc, lane_sums(v));
  }
  std::uint64_t total = reduce(acc);
  for (; i < n; ++i)
    total += tail_count(words[i]);
  return total;
}

BitCounts and_or(const std::uint64_t *a, const std::uint64_t *b,
                 std::size_t n) {
  __m256i acc_and = _mm256_setzero_si256();
  __m256i acc_or = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i va =
        _mm256_loadu_si256(reinterpret_cast<const __m256i *>(a + i));
    const __m256i vb =
        _mm256_loadu_si256(reinterpret_cast<const __m256i *>(b + i));
    acc_and = _mm256_add_epi64(acc_and, lane_sums(_mm256_and_si256(va, vb)));
    acc_or = _mm256_add_epi64(acc_or, lane_sums(_mm256_or_si256(va, vb)));
  }
  BitCounts c { reduce(acc_and), reduce(acc_or) };
  for (; i < n; ++i) {
    c.both += tail_count(a[i] & b[i]);
    c.either += tail_count(a[i] | b[i]);
  }
  return c;
}

}  // namespace molpipe::simd::avx2
