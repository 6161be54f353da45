// Reference implementations. Every vectorized variant is tested against these.

#include "kernels_internal.hpp"

namespace fsd::simd::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double squared_l2_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void dot_rows_scalar(const double* query, const double* rows, std::size_t n_rows,
                     std::size_t dim, double* out) {
  for (std::size_t r = 0; r < n_rows; ++r) out[r] = dot_scalar(query, rows + r * dim, dim);
}

}  // namespace

const Kernels kScalarKernels = {
    Isa::Scalar, dot_scalar, squared_l2_scalar, axpy_scalar, dot_rows_scalar,
};

}  // namespace fsd::simd::detail
