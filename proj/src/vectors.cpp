#include "fsd/vectors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsd/error.hpp"
#include "fsd/simd/kernels.hpp"
#include "fsd/vector_source.hpp"

namespace fsd {

namespace {

constexpr double kNormTolerance = 1e-9;

double clamp_distance(double d) { return std::clamp(d, 0.0, 2.0); }

void require_same_kind(const DocVector& a, const DocVector& b) {
  if (a.index() != b.index()) {
    throw ValidationError("cannot compare sparse and dense vectors");
  }
}

void require_same_dim(const DenseVector& a, const DenseVector& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("dense dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
  }
}

}  // namespace

SparseVector SparseVector::normalized(std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  std::vector<SparseEntry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (!std::isfinite(e.weight)) throw ValidationError("non-finite sparse weight");
    if (!merged.empty() && merged.back().index == e.index) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const SparseEntry& e) { return !(e.weight > 0.0); });

  double sq = 0.0;
  for (const auto& e : merged) sq += e.weight * e.weight;
  SparseVector v;
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& e : merged) e.weight *= inv;
    std::erase_if(merged, [](const SparseEntry& e) { return !(e.weight > 0.0); });
    v.entries_ = std::move(merged);
  }
  return v;
}

SparseVector SparseVector::from_normalized(std::vector<SparseEntry> entries) {
  double sq = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].weight > 0.0) || !std::isfinite(entries[i].weight)) {
      throw ValidationError("sparse weights must be positive and finite");
    }
    if (i > 0 && entries[i].index <= entries[i - 1].index) {
      throw ValidationError("sparse indices must be strictly increasing");
    }
    sq += entries[i].weight * entries[i].weight;
  }
  if (!entries.empty() && std::abs(std::sqrt(sq) - 1.0) > kNormTolerance) {
    throw ValidationError("sparse vector is not unit length");
  }
  SparseVector v;
  v.entries_ = std::move(entries);
  return v;
}

DenseVector DenseVector::normalized(std::vector<double> values) {
  for (double x : values) {
    if (!std::isfinite(x)) throw ValidationError("non-finite vector component");
  }
  DenseVector v;
  const double sq = simd::kernels().dot(values.data(), values.data(), values.size());
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (double& x : values) x /= norm;
    v.empty_ = false;
  }
  v.values_ = std::move(values);
  return v;
}

bool is_empty(const DocVector& v) {
  return std::visit([](const auto& x) { return x.empty(); }, v);
}

std::string_view to_string(VectorKind kind) {
  return kind == VectorKind::Sparse ? "sparse" : "dense";
}

double sparse_dot(const SparseVector& a, const SparseVector& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].index < eb[j].index) {
      ++i;
    } else if (eb[j].index < ea[i].index) {
      ++j;
    } else {
      sum += ea[i].weight * eb[j].weight;
      ++i;
      ++j;
    }
  }
  return sum;
}

double sparse_squared_distance(const SparseVector& a, const SparseVector& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    double d;
    if (j == eb.size() || (i < ea.size() && ea[i].index < eb[j].index)) {
      d = ea[i++].weight;
    } else if (i == ea.size() || eb[j].index < ea[i].index) {
      d = eb[j++].weight;
    } else {
      d = ea[i++].weight - eb[j++].weight;
    }
    sum += d * d;
  }
  return sum;
}

double dot(const DocVector& a, const DocVector& b) {
  require_same_kind(a, b);
  if (const auto* sa = std::get_if<SparseVector>(&a)) {
    return sparse_dot(*sa, std::get<SparseVector>(b));
  }
  const auto& da = std::get<DenseVector>(a);
  const auto& db = std::get<DenseVector>(b);
  require_same_dim(da, db);
  return simd::kernels().dot(da.values().data(), db.values().data(), da.dim());
}

double cosine_distance(const DocVector& a, const DocVector& b) {
  const double d = dot(a, b);  // validates kind/dimension first
  if (is_empty(a) || is_empty(b)) return 2.0;
  return clamp_distance(1.0 - d);
}

double euclidean_distance(const DocVector& a, const DocVector& b) {
  require_same_kind(a, b);
  if (const auto* sa = std::get_if<SparseVector>(&a)) {
    return std::sqrt(sparse_squared_distance(*sa, std::get<SparseVector>(b)));
  }
  const auto& da = std::get<DenseVector>(a);
  const auto& db = std::get<DenseVector>(b);
  require_same_dim(da, db);
  return std::sqrt(simd::kernels().squared_l2(da.values().data(), db.values().data(), da.dim()));
}

void VectorMap::insert(std::string id, DocVector vector) {
  vectors_.insert_or_assign(std::move(id), std::move(vector));
}

const DocVector* VectorMap::find(std::string_view id) const {
  auto it = vectors_.find(std::string(id));
  return it == vectors_.end() ? nullptr : &it->second;
}

}  // namespace fsd
