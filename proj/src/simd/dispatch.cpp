#include <atomic>
#include <cstdlib>
#include <string>

#include "fsd/error.hpp"
#include "kernels_internal.hpp"

namespace fsd::simd {

namespace {

const Kernels* select_initial() {
  if (const char* forced = std::getenv("FSD_SIMD"); forced && *forced) {
    return &kernels_for(parse_isa(forced));
  }
  return &kernels_for(detect_best_isa());
}

std::atomic<const Kernels*>& active() {
  static std::atomic<const Kernels*> ptr{select_initial()};
  return ptr;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  if (name == "neon") return Isa::Neon;
  throw ValidationError("unknown SIMD variant '" + std::string(name) + "'");
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(FSD_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(FSD_HAVE_NEON_KERNELS)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

Isa detect_best_isa() {
  if (isa_supported(Isa::Avx2)) return Isa::Avx2;
  if (isa_supported(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw ValidationError("SIMD variant '" + std::string(to_string(isa)) +
                          "' is not available on this machine");
  }
  switch (isa) {
#if defined(FSD_HAVE_AVX2_KERNELS)
    case Isa::Avx2: return detail::kAvx2Kernels;
#endif
#if defined(FSD_HAVE_NEON_KERNELS)
    case Isa::Neon: return detail::kNeonKernels;
#endif
    default: return detail::kScalarKernels;
  }
}

const Kernels& kernels() { return *active().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) { active().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace fsd::simd
