#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense inner-loop kernels with one scalar reference implementation and
// intrinsic variants (AVX2+FMA on x86-64, NEON on AArch64). The variant is
// picked once at runtime from CPU features; FSD_SIMD=scalar|avx2|neon forces
// a specific one.

namespace fsd::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);
Isa parse_isa(std::string_view name);

struct Kernels {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*squared_l2)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[r] = dot(query, rows + r * dim) for r in [0, n_rows)
  void (*dot_rows)(const double* query, const double* rows, std::size_t n_rows,
                   std::size_t dim, double* out);
};

bool isa_supported(Isa isa);
Isa detect_best_isa();

/// Kernels for a specific ISA; throws ValidationError when the CPU or the
/// build lacks it.
const Kernels& kernels_for(Isa isa);

/// Currently active kernel set (best supported unless overridden).
const Kernels& kernels();
void set_active_isa(Isa isa);

}  // namespace fsd::simd
