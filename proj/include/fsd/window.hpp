#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fsd/vectors.hpp"

namespace fsd {

enum class SearchBackend {
  Auto,           // inverted index for sparse windows, flat scan for dense
  FlatScan,       // exact distance to every window document
  InvertedIndex,  // sparse only: accumulate dot products over posting lists
};

struct Neighbor {
  std::size_t position;  // 0 = oldest document currently in the window
  std::uint64_t doc;     // caller-supplied document handle
  double distance;       // cosine distance
};

/// FIFO of the most recent `capacity` documents with an inverted index over
/// sparse contents. Dense contents live in a ring-buffer matrix so the flat
/// scan runs one batched SIMD kernel.
///
/// Queries are const and may run concurrently; push() is single-writer.
class WindowBuffer {
 public:
  WindowBuffer(std::size_t capacity, VectorKind kind, std::size_t dense_dim = 0);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  VectorKind kind() const { return kind_; }

  /// Appends; evicts the oldest document first when full.
  void push(std::uint64_t doc, const DocVector& vector);

  /// Handle of the document at FIFO position `position` (0 = oldest).
  std::uint64_t doc_at(std::size_t position) const;

  /// Exact minimum cosine distance; ties go to the most recent document.
  /// std::nullopt iff the window is empty.
  std::optional<Neighbor> nearest(const DocVector& query,
                                  SearchBackend backend = SearchBackend::Auto) const;

  /// Recomputes the inverted index from the stored vectors and compares.
  bool index_consistent() const;

  /// Per-thread scratch for inverted-index queries; reuse avoids allocation.
  class Scratch {
   public:
    Scratch() = default;

   private:
    friend class WindowBuffer;
    std::vector<double> scores;
    std::vector<std::uint8_t> marks;
    std::vector<std::uint32_t> touched;
  };
  std::optional<Neighbor> nearest(const DocVector& query, SearchBackend backend,
                                  Scratch& scratch) const;

 private:
  struct Posting {
    std::uint32_t slot;
    double weight;
  };
  struct PostingList {
    std::vector<Posting> items;
    std::size_t head = 0;  // evicted prefix
    std::size_t live() const { return items.size() - head; }
  };

  std::size_t slot_of(std::size_t position) const;
  std::size_t position_of(std::size_t slot) const;

  std::optional<Neighbor> flat_sparse(const SparseVector& q) const;
  std::optional<Neighbor> flat_dense(const DenseVector& q) const;
  std::optional<Neighbor> indexed(const SparseVector& q, Scratch& scratch) const;
  Neighbor make_neighbor(std::size_t slot, double distance) const;

  std::size_t capacity_;
  VectorKind kind_;
  std::size_t dim_;
  std::size_t head_ = 0;  // slot of the oldest document
  std::size_t size_ = 0;

  std::vector<std::uint64_t> docs_;
  std::vector<bool> empty_;
  std::size_t nonempty_count_ = 0;
  std::vector<SparseVector> sparse_;
  std::vector<double> dense_;  // capacity_ x dim_ rows
  std::vector<PostingList> postings_;
};

}  // namespace fsd
