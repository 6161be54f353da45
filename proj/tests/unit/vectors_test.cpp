#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "fsd/error.hpp"
#include "fsd/vectors.hpp"
#include "test_support.hpp"

namespace fsd {
namespace {

TEST(SparseVectorTest, NormalizesSortsAndMerges) {
  auto v = SparseVector::normalized({{5, 1.0}, {2, 2.0}, {5, 1.0}, {9, 0.0}, {7, -1.0}});
  ASSERT_EQ(v.nnz(), 2u);
  EXPECT_EQ(v.entries()[0].index, 2u);
  EXPECT_EQ(v.entries()[1].index, 5u);
  EXPECT_NEAR(v.entries()[0].weight, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(v.entries()[1].weight, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(v.norm(), 1.0);
}

TEST(SparseVectorTest, EmptyStaysEmpty) {
  auto v = SparseVector::normalized({{1, 0.0}});
  EXPECT_TRUE(v.empty());
  EXPECT_EQ(v.norm(), 0.0);
}

TEST(SparseVectorTest, FromNormalizedChecksInvariants) {
  EXPECT_THROW(SparseVector::from_normalized({{3, 0.6}, {1, 0.8}}), Error);
  EXPECT_THROW(SparseVector::from_normalized({{1, 0.5}}), Error);
  EXPECT_NO_THROW(SparseVector::from_normalized({{1, 0.6}, {3, 0.8}}));
}

TEST(DenseVectorTest, NormalizeAndRejectNonFinite) {
  auto v = DenseVector::normalized({3.0, 4.0});
  EXPECT_DOUBLE_EQ(v.values()[0], 0.6);
  EXPECT_DOUBLE_EQ(v.values()[1], 0.8);
  EXPECT_FALSE(v.empty());
  EXPECT_TRUE(DenseVector::normalized({0.0, 0.0}).empty());
  EXPECT_THROW(DenseVector::normalized({1.0, std::numeric_limits<double>::quiet_NaN()}),
               ValidationError);
  EXPECT_THROW(DenseVector::normalized({std::numeric_limits<double>::infinity()}),
               ValidationError);
}

TEST(CosineDistanceTest, Examples) {
  DocVector a = SparseVector::normalized({{0, 1.0}});
  DocVector b = SparseVector::normalized({{1, 1.0}});
  DocVector ab = SparseVector::normalized({{0, 1.0}, {1, 1.0}});
  EXPECT_DOUBLE_EQ(cosine_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(cosine_distance(a, b), 1.0);
  EXPECT_NEAR(cosine_distance(a, ab), 1.0 - 1.0 / std::sqrt(2.0), 1e-15);
  DocVector none = SparseVector{};
  EXPECT_EQ(cosine_distance(none, a), 2.0);
  EXPECT_EQ(cosine_distance(none, none), 2.0);

  DocVector x = DenseVector::normalized({1.0, 0.0});
  DocVector y = DenseVector::normalized({-1.0, 0.0});
  EXPECT_DOUBLE_EQ(cosine_distance(x, y), 2.0);
  EXPECT_THROW(cosine_distance(a, x), ValidationError);
  DocVector z = DenseVector::normalized({1.0, 0.0, 0.0});
  EXPECT_THROW(cosine_distance(x, z), ValidationError);
}

TEST(CosineDistanceProperty, MatchesNaiveAndStaysInRange) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    DocVector a = testing::random_sparse(rng, 40, 1 + trial % 9);
    DocVector b = testing::random_sparse(rng, 40, 1 + trial % 7);
    const double d = cosine_distance(a, b);
    ASSERT_NEAR(d, testing::naive_cosine_distance(a, b), 1e-12);
    ASSERT_GE(d, 0.0);
    ASSERT_LE(d, 2.0);
    ASSERT_EQ(d, cosine_distance(b, a));

    DocVector x = testing::random_unit_dense(rng, 17);
    DocVector y = testing::random_unit_dense(rng, 17);
    ASSERT_NEAR(cosine_distance(x, y), testing::naive_cosine_distance(x, y), 1e-12);
  }
}

TEST(EuclideanDistanceTest, RelatesToCosineOnUnitVectors) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    DocVector a = testing::random_sparse(rng, 30, 4);
    DocVector b = testing::random_sparse(rng, 30, 4);
    const double e = euclidean_distance(a, b);
    ASSERT_NEAR(e * e, 2.0 * cosine_distance(a, b), 1e-12);
  }
}

}  // namespace
}  // namespace fsd
