#include "doctest.h"

#include <bit>
#include <random>
#include <vector>

#include "molpipe/simd/bitops.h"

using namespace molpipe::simd;

namespace {

std::uint64_t naive_popcount(const std::vector<std::uint64_t> &w) {
  std::uint64_t n = 0;
  for (std::uint64_t x: w)
    for (; x; x &= x - 1)
      ++n;
  return n;
}

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa: { Isa::kScalar, Isa::kAvx2, Isa::kNeon })
    if (supported(isa))
      out.push_back(isa);
  return out;
}

}  // namespace

TEST_CASE("scalar is always available") {
  CHECK(supported(Isa::kScalar));
  CHECK(kernels_for(Isa::kScalar).isa == Isa::kScalar);
  CHECK(to_string(Isa::kAvx2) == "avx2");
  MESSAGE("active kernels: " << to_string(active_kernels().isa));
}

TEST_CASE("unsupported variants fall back to scalar") {
  for (Isa isa: { Isa::kAvx2, Isa::kNeon })
    if (!supported(isa))
      CHECK(kernels_for(isa).isa == Isa::kScalar);
}

TEST_CASE("every variant agrees with a naive count") {
  std::mt19937_64 rng(99);
  for (Isa isa: available()) {
    CAPTURE(to_string(isa));
    const Kernels &k = kernels_for(isa);
    for (std::size_t n = 0; n <= 70; ++n) {
      for (int rep = 0; rep < 5; ++rep) {
        std::vector<std::uint64_t> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = rep == 0 ? ~std::uint64_t { 0 } : rng() & rng();
          b[i] = rep == 1 ? 0 : rng();
        }
        CHECK(k.popcount(a.data(), n) == naive_popcount(a));
        std::vector<std::uint64_t> both(n), either(n);
        for (std::size_t i = 0; i < n; ++i) {
          both[i] = a[i] & b[i];
          either[i] = a[i] | b[i];
        }
        const BitCounts c = k.and_or(a.data(), b.data(), n);
        CHECK(c.both == naive_popcount(both));
        CHECK(c.either == naive_popcount(either));
      }
    }
  }
}

TEST_CASE("variants agree with each other on unaligned spans") {
  std::mt19937_64 rng(7);
  std::vector<std::uint64_t> a(300), b(300);
  for (auto &x: a)
    x = rng();
  for (auto &x: b)
    x = rng();
  const Kernels &ref = kernels_for(Isa::kScalar);
  for (Isa isa: available()) {
    const Kernels &k = kernels_for(isa);
    for (std::size_t off = 0; off < 5; ++off)
      for (std::size_t n: { 1u, 3u, 4u, 8u, 31u, 32u, 33u, 295u }) {
        CHECK(k.popcount(a.data() + off, n) == ref.popcount(a.data() + off, n));
        const BitCounts x = k.and_or(a.data() + off, b.data() + off, n);
        const BitCounts y = ref.and_or(a.data() + off, b.data() + off, n);
        CHECK(x.both == y.both);
        CHECK(x.either == y.either);
      }
  }
}
