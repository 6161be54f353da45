#include "fsd/window.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "fsd/error.hpp"
#include "fsd/simd/kernels.hpp"

namespace fsd {

namespace {

double to_distance(double dot) { return std::clamp(1.0 - dot, 0.0, 2.0); }

constexpr double kEmptyDistance = 2.0;

}  // namespace

WindowBuffer::WindowBuffer(std::size_t capacity, VectorKind kind, std::size_t dense_dim)
    : capacity_(capacity), kind_(kind), dim_(dense_dim) {
  if (capacity_ == 0) throw ValidationError("window capacity must be positive");
  docs_.resize(capacity_);
  empty_.resize(capacity_, true);
  if (kind_ == VectorKind::Sparse) {
    sparse_.resize(capacity_);
  } else if (dim_ > 0) {
    dense_.assign(capacity_ * dim_, 0.0);
  }
}

std::size_t WindowBuffer::slot_of(std::size_t position) const {
  return (head_ + position) % capacity_;
}

std::size_t WindowBuffer::position_of(std::size_t slot) const {
  return (slot + capacity_ - head_) % capacity_;
}

std::uint64_t WindowBuffer::doc_at(std::size_t position) const {
  if (position >= size_) throw ValidationError("window position out of range");
  return docs_[slot_of(position)];
}

void WindowBuffer::push(std::uint64_t doc, const DocVector& vector) {
  if (kind_of(vector) != kind_) {
    throw ValidationError(std::string("window holds ") + std::string(to_string(kind_)) +
                          " vectors, got " + std::string(to_string(kind_of(vector))));
  }
  if (kind_ == VectorKind::Dense) {
    const auto& dv = std::get<DenseVector>(vector);
    if (dim_ == 0) {
      dim_ = dv.dim();
      dense_.assign(capacity_ * dim_, 0.0);
    }
    if (dv.dim() != dim_) {
      throw ValidationError("dense dimension mismatch: window " + std::to_string(dim_) +
                            ", vector " + std::to_string(dv.dim()));
    }
  }

  if (size_ == capacity_) {
    const std::size_t slot = head_;
    if (kind_ == VectorKind::Sparse) {
      for (const auto& e : sparse_[slot].entries()) {
        auto& list = postings_[e.index];
        FSD_CHECK(list.live() > 0 && list.items[list.head].slot == slot,
                  "posting list out of FIFO order");
        ++list.head;
        if (list.head == list.items.size()) {
          list.items.clear();
          list.head = 0;
        } else if (list.head >= 32 && 2 * list.head >= list.items.size()) {
          list.items.erase(list.items.begin(),
                           list.items.begin() + static_cast<std::ptrdiff_t>(list.head));
          list.head = 0;
        }
      }
      sparse_[slot] = SparseVector();
    }
    if (!empty_[slot]) --nonempty_count_;
    head_ = (head_ + 1) % capacity_;
    --size_;
  }

  const std::size_t slot = (head_ + size_) % capacity_;
  docs_[slot] = doc;
  const bool is_empty_vec = is_empty(vector);
  empty_[slot] = is_empty_vec;
  if (!is_empty_vec) ++nonempty_count_;
  if (kind_ == VectorKind::Sparse) {
    const auto& sv = std::get<SparseVector>(vector);
    for (const auto& e : sv.entries()) {
      if (e.index >= postings_.size()) postings_.resize(static_cast<std::size_t>(e.index) + 1);
      postings_[e.index].items.push_back({static_cast<std::uint32_t>(slot), e.weight});
    }
    sparse_[slot] = sv;
  } else {
    auto values = std::get<DenseVector>(vector).values();
    std::copy(values.begin(), values.end(), dense_.begin() + static_cast<std::ptrdiff_t>(slot * dim_));
  }
  ++size_;
}

Neighbor WindowBuffer::make_neighbor(std::size_t slot, double distance) const {
  return Neighbor{position_of(slot), docs_[slot], distance};
}

std::optional<Neighbor> WindowBuffer::nearest(const DocVector& query, SearchBackend backend) const {
  Scratch scratch;
  return nearest(query, backend, scratch);
}

std::optional<Neighbor> WindowBuffer::nearest(const DocVector& query, SearchBackend backend,
                                              Scratch& scratch) const {
  if (kind_of(query) != kind_) {
    throw ValidationError(std::string("query is ") + std::string(to_string(kind_of(query))) +
                          " but window holds " + std::string(to_string(kind_)) + " vectors");
  }
  if (kind_ == VectorKind::Dense) {
    const auto& q = std::get<DenseVector>(query);
    if (dim_ != 0 && q.dim() != dim_) {
      throw ValidationError("dense dimension mismatch: window " + std::to_string(dim_) +
                            ", query " + std::to_string(q.dim()));
    }
    if (backend == SearchBackend::InvertedIndex) {
      throw ValidationError("inverted index search requires sparse vectors");
    }
    return flat_dense(q);
  }
  const auto& q = std::get<SparseVector>(query);
  if (backend == SearchBackend::FlatScan) return flat_sparse(q);
  return indexed(q, scratch);
}

std::optional<Neighbor> WindowBuffer::flat_sparse(const SparseVector& q) const {
  if (size_ == 0) return std::nullopt;
  std::size_t best_slot = slot_of(size_ - 1);
  double best = kEmptyDistance + 1.0;
  // Newest first with strict improvement: ties keep the most recent document.
  for (std::size_t p = size_; p-- > 0;) {
    const std::size_t slot = slot_of(p);
    const double d = (q.empty() || empty_[slot]) ? kEmptyDistance
                                                 : to_distance(sparse_dot(q, sparse_[slot]));
    if (d < best) {
      best = d;
      best_slot = slot;
    }
  }
  return make_neighbor(best_slot, best);
}

std::optional<Neighbor> WindowBuffer::flat_dense(const DenseVector& q) const {
  if (size_ == 0) return std::nullopt;
  // Until the first eviction the occupied slots are [0, size_); afterwards all
  // slots are occupied. Either way rows [0, size_) are live.
  std::vector<double> dots(size_);
  if (!q.empty()) {
    simd::kernels().dot_rows(q.values().data(), dense_.data(), size_, dim_, dots.data());
  }
  std::size_t best_slot = slot_of(size_ - 1);
  double best = kEmptyDistance + 1.0;
  for (std::size_t p = size_; p-- > 0;) {
    const std::size_t slot = slot_of(p);
    const double d = (q.empty() || empty_[slot]) ? kEmptyDistance : to_distance(dots[slot]);
    if (d < best) {
      best = d;
      best_slot = slot;
    }
  }
  return make_neighbor(best_slot, best);
}

std::optional<Neighbor> WindowBuffer::indexed(const SparseVector& q, Scratch& scratch) const {
  if (size_ == 0) return std::nullopt;
  const std::size_t newest = slot_of(size_ - 1);
  if (q.empty() || nonempty_count_ == 0) return make_neighbor(newest, kEmptyDistance);

  if (scratch.scores.size() < capacity_) {
    scratch.scores.assign(capacity_, 0.0);
    scratch.marks.assign(capacity_, 0);
    scratch.touched.clear();
  }
  auto& scores = scratch.scores;
  auto& mark = scratch.marks;
  auto& touched = scratch.touched;
  // Accumulate in ascending term order, the same summation order as sparse_dot,
  // so the two backends produce bit-identical dot products.
  for (const auto& e : q.entries()) {
    if (e.index >= postings_.size()) continue;
    const auto& list = postings_[e.index];
    for (std::size_t k = list.head; k < list.items.size(); ++k) {
      const auto& posting = list.items[k];
      if (!mark[posting.slot]) {
        mark[posting.slot] = 1;
        touched.push_back(posting.slot);
      }
      scores[posting.slot] += e.weight * posting.weight;
    }
  }

  std::size_t best_slot = newest;
  double best = kEmptyDistance + 1.0;
  std::size_t best_pos = 0;
  for (std::uint32_t slot : touched) {
    const double d = to_distance(scores[slot]);
    const std::size_t pos = position_of(slot);
    if (d < best || (d == best && pos > best_pos)) {
      best = d;
      best_slot = slot;
      best_pos = pos;
    }
  }

  // Non-empty documents sharing no term with the query sit at distance exactly 1.
  if (nonempty_count_ > touched.size()) {
    for (std::size_t p = size_; p-- > 0;) {
      const std::size_t slot = slot_of(p);
      if (empty_[slot] || mark[slot]) continue;
      if (1.0 < best || (1.0 == best && p > best_pos)) {
        best = 1.0;
        best_slot = slot;
        best_pos = p;
      }
      break;
    }
  }

  for (std::uint32_t slot : touched) {
    scores[slot] = 0.0;
    mark[slot] = 0;
  }
  touched.clear();
  return make_neighbor(best_slot, best);
}

bool WindowBuffer::index_consistent() const {
  if (kind_ != VectorKind::Sparse) return true;
  std::map<std::pair<TermIndex, std::uint32_t>, double> expected, actual;
  std::size_t nonempty = 0;
  for (std::size_t p = 0; p < size_; ++p) {
    const std::size_t slot = slot_of(p);
    if (!empty_[slot]) ++nonempty;
    if (empty_[slot] != sparse_[slot].empty()) return false;
    for (const auto& e : sparse_[slot].entries()) {
      expected[{e.index, static_cast<std::uint32_t>(slot)}] = e.weight;
    }
  }
  for (std::size_t t = 0; t < postings_.size(); ++t) {
    const auto& list = postings_[t];
    std::size_t prev_pos = 0;
    for (std::size_t k = list.head; k < list.items.size(); ++k) {
      const auto& posting = list.items[k];
      const std::size_t pos = position_of(posting.slot);
      if (pos >= size_ || (k > list.head && pos <= prev_pos)) return false;
      prev_pos = pos;
      if (!actual.emplace(std::make_pair(static_cast<TermIndex>(t), posting.slot), posting.weight)
               .second) {
        return false;
      }
    }
  }
  return nonempty == nonempty_count_ && expected == actual;
}

}  // namespace fsd
