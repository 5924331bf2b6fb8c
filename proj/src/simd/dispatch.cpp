#include <cstdlib>
#include <string>

#include "molpipe/simd/bitops.h"

namespace molpipe::simd {
namespace {

constexpr Kernels kScalar { Isa::kScalar, &scalar::popcount, &scalar::and_or };
#if defined(MOLPIPE_HAVE_AVX2)
constexpr Kernels kAvx2 { Isa::kAvx2, &avx2::popcount, &avx2::and_or };
#endif
#if defined(MOLPIPE_HAVE_NEON)
constexpr Kernels kNeon { Isa::kNeon, &neon::popcount, &neon::and_or };
#endif

const Kernels &select() {
  const char *env = std::getenv("MOLPIPE_SIMD");
  const std::string want = env ? env : "";
  if (want == "scalar")
    return kScalar;
  if ((want.empty() || want == "avx2") && supported(Isa::kAvx2))
    return kernels_for(Isa::kAvx2);
  if ((want.empty() || want == "neon") && supported(Isa::kNeon))
    return kernels_for(Isa::kNeon);
  return kScalar;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
  case Isa::kScalar:
    return "scalar";
  case Isa::kAvx2:
    return "avx2";
  case Isa::kNeon:
    return "neon";
  }
  return "scalar";
}

bool supported(Isa isa) {
  switch (isa) {
  case Isa::kScalar:
    return true;
  case Isa::kAvx2:
#if defined(MOLPIPE_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
  case Isa::kNeon:
#if defined(MOLPIPE_HAVE_NEON)
    return true;
#else
    return false;
#endif
  }
  return false;
}

const Kernels &kernels_for(Isa isa) {
  if (!supported(isa))
    return kScalar;
  switch (isa) {
#if defined(MOLPIPE_HAVE_AVX2)
  case Isa::kAvx2:
    return kAvx2;
#endif
#if defined(MOLPIPE_HAVE_NEON)
  case Isa::kNeon:
    return kNeon;
#endif
  default:
    return kScalar;
  }
}

const Kernels &active_kernels() {
  static const Kernels &chosen = select();
  return chosen;
}

}  // namespace molpipe::simd
