#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace fsd {

using TermIndex = std::uint32_t;

struct SparseEntry {
  TermIndex index;
  double weight;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// L2-normalized sparse vector with strictly increasing indices and positive
/// weights. An empty vector has norm 0 and is "flagged empty".
class SparseVector {
 public:
  SparseVector() = default;

  /// Sorts, merges duplicate indices (summing), drops non-positive weights and
  /// normalizes to unit length.
  static SparseVector normalized(std::vector<SparseEntry> entries);
  /// Takes entries that already satisfy every invariant (checked).
  static SparseVector from_normalized(std::vector<SparseEntry> entries);

  std::span<const SparseEntry> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double norm() const { return empty() ? 0.0 : 1.0; }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<SparseEntry> entries_;
};

/// L2-normalized dense vector; the zero vector is the empty representation.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim) : values_(dim, 0.0) {}

  /// Scales to unit length. All-zero input stays zero and is flagged empty.
  /// Non-finite components throw ValidationError.
  static DenseVector normalized(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  bool empty() const { return empty_; }
  double norm() const { return empty_ ? 0.0 : 1.0; }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> values_;
  bool empty_ = true;
};

using DocVector = std::variant<SparseVector, DenseVector>;

enum class VectorKind { Sparse, Dense };

inline VectorKind kind_of(const DocVector& v) {
  return std::holds_alternative<SparseVector>(v) ? VectorKind::Sparse
                                                 : VectorKind::Dense;
}
bool is_empty(const DocVector& v);
std::string_view to_string(VectorKind kind);

double sparse_dot(const SparseVector& a, const SparseVector& b);
double sparse_squared_distance(const SparseVector& a, const SparseVector& b);

double dot(const DocVector& a, const DocVector& b);

/// 1 - cosine similarity, clamped to [0, 2]. Empty operands are maximally far
/// (2.0). Mixed kinds and dense dimension mismatch throw ValidationError.
double cosine_distance(const DocVector& a, const DocVector& b);

/// Euclidean distance between the stored (unit or zero) vectors.
double euclidean_distance(const DocVector& a, const DocVector& b);

}  // namespace fsd
