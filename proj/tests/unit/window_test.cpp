#include <random>

#include <gtest/gtest.h>

#include "fsd/error.hpp"
#include "fsd/simd/kernels.hpp"
#include "fsd/window.hpp"
#include "test_support.hpp"

namespace fsd {
namespace {

DocVector unit(TermIndex i) { return SparseVector::normalized({{i, 1.0}}); }

TEST(WindowTest, EmptyWindowHasNoNeighbor) {
  WindowBuffer w(4, VectorKind::Sparse);
  EXPECT_FALSE(w.nearest(unit(0)).has_value());
  WindowBuffer d(4, VectorKind::Dense, 3);
  EXPECT_FALSE(d.nearest(DocVector(DenseVector::normalized({1, 0, 0}))).has_value());
}

TEST(WindowTest, OrthogonalDocumentsExactMatch) {
  for (auto backend : {SearchBackend::FlatScan, SearchBackend::InvertedIndex}) {
    WindowBuffer w(10, VectorKind::Sparse);
    w.push(100, unit(0));
    w.push(101, unit(1));
    w.push(102, unit(2));
    auto n = w.nearest(unit(1), backend);
    ASSERT_TRUE(n.has_value());
    EXPECT_EQ(n->position, 1u);
    EXPECT_EQ(n->doc, 101u);
    EXPECT_EQ(n->distance, 0.0);
  }
}

TEST(WindowTest, DisjointQueryTiesGoToMostRecent) {
  for (auto backend : {SearchBackend::FlatScan, SearchBackend::InvertedIndex}) {
    WindowBuffer w(10, VectorKind::Sparse);
    w.push(1, unit(0));
    w.push(2, unit(1));
    w.push(3, SparseVector{});
    auto n = w.nearest(unit(7), backend);
    ASSERT_TRUE(n.has_value());
    EXPECT_EQ(n->doc, 2u);
    EXPECT_EQ(n->distance, 1.0);
  }
}

TEST(WindowTest, AllEmptyDocumentsAreAtDistanceTwo) {
  for (auto backend : {SearchBackend::FlatScan, SearchBackend::InvertedIndex}) {
    WindowBuffer w(10, VectorKind::Sparse);
    w.push(1, SparseVector{});
    w.push(2, SparseVector{});
    auto n = w.nearest(unit(0), backend);
    ASSERT_TRUE(n.has_value());
    EXPECT_EQ(n->distance, 2.0);
    auto m = w.nearest(SparseVector{}, backend);
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(m->distance, 2.0);
  }
}

TEST(WindowTest, EvictionKeepsIndexConsistent) {
  WindowBuffer w(3, VectorKind::Sparse);
  for (std::uint64_t i = 0; i < 10; ++i) {
    w.push(i, unit(static_cast<TermIndex>(i % 4)));
    EXPECT_LE(w.size(), 3u);
    EXPECT_TRUE(w.index_consistent());
  }
  EXPECT_EQ(w.doc_at(0), 7u);
  EXPECT_EQ(w.doc_at(2), 9u);
  // doc 6 (term 2) is evicted; term 2 now has no posting.
  auto n = w.nearest(unit(2), SearchBackend::InvertedIndex);
  EXPECT_EQ(n->distance, 1.0);
  EXPECT_EQ(n->doc, 9u);
}

TEST(WindowTest, KindMismatchesThrow) {
  WindowBuffer s(3, VectorKind::Sparse);
  EXPECT_THROW(s.push(0, DocVector(DenseVector::normalized({1, 0}))), ValidationError);
  WindowBuffer d(3, VectorKind::Dense, 2);
  EXPECT_THROW(d.push(0, unit(0)), ValidationError);
  EXPECT_THROW(d.push(0, DocVector(DenseVector::normalized({1, 0, 0}))), ValidationError);
  d.push(0, DocVector(DenseVector::normalized({1, 0})));
  EXPECT_THROW(d.nearest(DocVector(DenseVector::normalized({1, 0})), SearchBackend::InvertedIndex),
               ValidationError);
  EXPECT_THROW(WindowBuffer(0, VectorKind::Sparse), ValidationError);
}

// Brute-force oracle: scan every position, ties to the most recent.
std::pair<std::size_t, double> oracle(const std::vector<DocVector>& window, const DocVector& q) {
  std::size_t best = 0;
  double dist = 3.0;
  for (std::size_t p = 0; p < window.size(); ++p) {
    const double d = testing::naive_cosine_distance(q, window[p]);
    if (d <= dist) {
      dist = d;
      best = p;
    }
  }
  return {best, dist};
}

TEST(WindowProperty, IndexMatchesFlatScanAndOracle) {
  std::mt19937_64 rng(21);
  WindowBuffer w(50, VectorKind::Sparse);
  std::vector<DocVector> live;
  WindowBuffer::Scratch scratch;
  for (std::uint64_t i = 0; i < 400; ++i) {
    DocVector v = (i % 37 == 5) ? DocVector(SparseVector{}) : DocVector(testing::random_sparse(rng, 60, 1 + i % 5));
    w.push(i, v);
    live.push_back(v);
    if (live.size() > 50) live.erase(live.begin());
    for (int q = 0; q < 3; ++q) {
      DocVector query = testing::random_sparse(rng, 60, 1 + (i + q) % 6);
      auto a = w.nearest(query, SearchBackend::InvertedIndex, scratch);
      auto b = w.nearest(query, SearchBackend::FlatScan);
      auto [pos, dist] = oracle(live, query);
      ASSERT_TRUE(a && b);
      ASSERT_EQ(a->position, b->position);
      ASSERT_EQ(a->distance, b->distance);
      ASSERT_NEAR(a->distance, dist, 1e-12);
      ASSERT_EQ(w.doc_at(a->position), a->doc);
      // The oracle may prefer a different slot only on a floating-point tie.
      if (a->position != pos) {
        ASSERT_NEAR(testing::naive_cosine_distance(query, live[a->position]), dist, 1e-12);
      }
    }
  }
  EXPECT_TRUE(w.index_consistent());
}

TEST(WindowProperty, DenseMatchesOracleOnEveryIsa) {
  const auto before = simd::kernels().isa;
  for (auto isa : {simd::Isa::Scalar, simd::Isa::Avx2, simd::Isa::Neon}) {
    if (!simd::isa_supported(isa)) continue;
    simd::set_active_isa(isa);
    std::mt19937_64 rng(8);
    WindowBuffer w(20, VectorKind::Dense, 13);
    std::vector<DocVector> live;
    for (std::uint64_t i = 0; i < 100; ++i) {
      DocVector v = testing::random_unit_dense(rng, 13);
      w.push(i, v);
      live.push_back(v);
      if (live.size() > 20) live.erase(live.begin());
      DocVector query = testing::random_unit_dense(rng, 13);
      auto n = w.nearest(query);
      auto [pos, dist] = oracle(live, query);
      ASSERT_TRUE(n.has_value());
      ASSERT_NEAR(n->distance, dist, 1e-12);
      ASSERT_EQ(n->position, pos);
    }
  }
  simd::set_active_isa(before);
}

}  // namespace
}  // namespace fsd
