#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace molpipe::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

struct BitCounts {
  std::uint64_t both = 0;    // |a & b|
  std::uint64_t either = 0;  // |a | b|
};

using PopcountFn = std::uint64_t (*)(const std::uint64_t *, std::size_t);
using AndOrFn = BitCounts (*)(const std::uint64_t *, const std::uint64_t *,
                              std::size_t);

struct Kernels {
  Isa isa;
  PopcountFn popcount;
  AndOrFn and_or;
};

namespace scalar {
std::uint64_t popcount(const std::uint64_t *words, std::size_t n);
BitCounts and_or(const std::uint64_t *a, const std::uint64_t *b,
                 std::size_t n);
}  // namespace scalar

#if defined(MOLPIPE_HAVE_AVX2)
namespace avx2 {
std::uint64_t popcount(const std::uint64_t *words, std::size_t n);
BitCounts and_or(const std::uint64_t *a, const std::uint64_t *b,
                 std::size_t n);
}  // namespace avx2
#endif

#if defined(MOLPIPE_HAVE_NEON)
namespace neon {
std::uint64_t popcount(const std::uint64_t *words, std::size_t n);
BitCounts and_or(const std::uint64_t *a, const std::uint64_t *b,
                 std::size_t n);
}  // namespace neon
#endif

// Whether this build carries the variant and the CPU can run it.
bool supported(Isa isa);
// The kernel table for a specific variant; scalar when unsupported.
const Kernels &kernels_for(Isa isa);
// Best supported variant, chosen once. MOLPIPE_SIMD=scalar|avx2|neon in the
// environment narrows the choice (an unsupported request falls back to
// scalar).
const Kernels &active_kernels();

inline std::uint64_t popcount(const std::uint64_t *words, std::size_t n) {
  return active_kernels().popcount(words, n);
}

inline BitCounts and_or(const std::uint64_t *a, const std::uint64_t *b,
                        std::size_t n) {
  return active_kernels().and_or(a, b, n);
}

}  // namespace molpipe::simd
