#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fsd/error.hpp"
#include "fsd/simd/kernels.hpp"

namespace fsd::simd {
namespace {

std::vector<Isa> vector_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

// Summation order differs between variants; compare against the sum of
// absolute terms.
double tolerance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i]) + a[i] * a[i] + b[i] * b[i];
  return 1e-12 * (1.0 + s);
}

TEST(SimdTest, ScalarAlwaysAvailable) {
  EXPECT_TRUE(isa_supported(Isa::Scalar));
  EXPECT_EQ(kernels_for(Isa::Scalar).isa, Isa::Scalar);
  EXPECT_EQ(parse_isa("scalar"), Isa::Scalar);
  EXPECT_EQ(parse_isa("avx2"), Isa::Avx2);
  EXPECT_EQ(parse_isa("neon"), Isa::Neon);
  EXPECT_THROW(parse_isa("sse9"), ValidationError);
  EXPECT_TRUE(isa_supported(detect_best_isa()));
}

TEST(SimdTest, UnsupportedIsaThrows) {
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (!isa_supported(isa)) EXPECT_THROW(kernels_for(isa), ValidationError);
  }
}

TEST(SimdTest, SetActiveIsaSwitches) {
  const Isa before = kernels().isa;
  set_active_isa(Isa::Scalar);
  EXPECT_EQ(kernels().isa, Isa::Scalar);
  set_active_isa(before);
  EXPECT_EQ(kernels().isa, before);
}

TEST(SimdTest, ScalarReferenceValues) {
  const auto& k = kernels_for(Isa::Scalar);
  std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  EXPECT_EQ(k.dot(a.data(), b.data(), 3), 32.0);
  EXPECT_EQ(k.squared_l2(a.data(), b.data(), 3), 27.0);
  k.axpy(2.0, a.data(), b.data(), 3);
  EXPECT_EQ(b, (std::vector<double>{6, 9, 12}));
  EXPECT_EQ(k.dot(a.data(), b.data(), 0), 0.0);
}

TEST(SimdEquivalence, DotAndSquaredL2) {
  const auto& ref = kernels_for(Isa::Scalar);
  std::mt19937_64 rng(1);
  for (Isa isa : vector_isas()) {
    const auto& k = kernels_for(isa);
    for (std::size_t n = 0; n < 300; ++n) {
      auto a = random_values(rng, n), b = random_values(rng, n);
      const double tol = tolerance(a, b);
      ASSERT_NEAR(k.dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), tol) << n;
      ASSERT_NEAR(k.squared_l2(a.data(), b.data(), n), ref.squared_l2(a.data(), b.data(), n),
                  tol)
          << n;
    }
  }
}

TEST(SimdEquivalence, Axpy) {
  const auto& ref = kernels_for(Isa::Scalar);
  std::mt19937_64 rng(2);
  for (Isa isa : vector_isas()) {
    const auto& k = kernels_for(isa);
    for (std::size_t n = 0; n < 200; ++n) {
      auto x = random_values(rng, n), y = random_values(rng, n);
      auto y_ref = y;
      const double alpha = random_values(rng, 1)[0];
      k.axpy(alpha, x.data(), y.data(), n);
      ref.axpy(alpha, x.data(), y_ref.data(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(y[i], y_ref[i], 1e-13 * (1 + std::abs(y_ref[i])));
    }
  }
}

TEST(SimdEquivalence, DotRows) {
  const auto& ref = kernels_for(Isa::Scalar);
  std::mt19937_64 rng(3);
  for (Isa isa : vector_isas()) {
    const auto& k = kernels_for(isa);
    for (std::size_t rows : {0u, 1u, 3u, 4u, 5u, 9u, 33u}) {
      for (std::size_t dim : {1u, 2u, 7u, 16u, 17u, 100u, 300u}) {
        auto q = random_values(rng, dim);
        auto m = random_values(rng, rows * dim);
        std::vector<double> out(rows, -1.0), out_ref(rows, -2.0);
        k.dot_rows(q.data(), m.data(), rows, dim, out.data());
        ref.dot_rows(q.data(), m.data(), rows, dim, out_ref.data());
        for (std::size_t r = 0; r < rows; ++r) {
          std::vector<double> row(m.begin() + r * dim, m.begin() + (r + 1) * dim);
          ASSERT_NEAR(out[r], out_ref[r], tolerance(q, row));
          ASSERT_NEAR(out_ref[r], ref.dot(q.data(), row.data(), dim), tolerance(q, row));
        }
      }
    }
  }
}

}  // namespace
}  // namespace fsd::simd
