#include "fsd/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "fsd/error.hpp"
#include "fsd/random.hpp"

namespace fsd {

double triangular_kernel(const DocVector& x, const DocVector& y) {
  return 1.0 - euclidean_distance(x, y);
}

std::vector<double> triangular_gram(std::span<const DocVector> vectors) {
  const std::size_t n = vectors.size();
  std::vector<double> gram(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    gram[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = triangular_kernel(vectors[i], vectors[j]);
      gram[i * n + j] = k;
      gram[j * n + i] = k;
    }
  }
  return gram;
}

namespace {

constexpr double kTau = 1e-12;

// Rows of the Gram matrix over a training set, either fully precomputed or
// computed on demand behind an LRU cache. Rows do not depend on labels, so
// one instance serves every one-vs-rest problem.
class KernelRows {
 public:
  static constexpr std::size_t kPrecomputeLimit = 4096;
  static constexpr std::size_t kCacheBytes = std::size_t{512} << 20;

  explicit KernelRows(std::span<const DocVector> vectors) : vectors_(vectors) {
    const std::size_t n = vectors_.size();
    if (n <= kPrecomputeLimit) {
      full_ = triangular_gram(vectors_);
    } else {
      capacity_ = std::max<std::size_t>(2, kCacheBytes / (n * sizeof(double)));
    }
  }

  explicit KernelRows(std::span<const double> gram, std::size_t n) : n_override_(n) {
    full_.assign(gram.begin(), gram.end());
  }

  std::size_t size() const { return n_override_ ? n_override_ : vectors_.size(); }

  std::span<const double> row(std::size_t i) {
    const std::size_t n = size();
    if (!full_.empty()) return {full_.data() + i * n, n};
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->values;
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().row);
      lru_.pop_back();
    }
    lru_.push_front({i, std::vector<double>(n)});
    auto& values = lru_.front().values;
    for (std::size_t j = 0; j < n; ++j) {
      values[j] = j == i ? 1.0 : triangular_kernel(vectors_[i], vectors_[j]);
    }
    index_[i] = lru_.begin();
    return values;
  }

  double diag(std::size_t i) const {
    const std::size_t n = size();
    return full_.empty() ? 1.0 : full_[i * n + i];
  }

 private:
  struct CachedRow {
    std::size_t row;
    std::vector<double> values;
  };

  std::span<const DocVector> vectors_;
  std::size_t n_override_ = 0;
  std::vector<double> full_;
  std::size_t capacity_ = 0;
  std::list<CachedRow> lru_;
  std::unordered_map<std::size_t, std::list<CachedRow>::iterator> index_;
};

BinarySvmSolution solve(KernelRows& rows, std::span<const int> y, const SvmParams& params) {
  const std::size_t n = y.size();
  if (n == 0) throw ValidationError("SVM training set is empty");
  if (!(params.C > 0.0)) throw ValidationError("SVM C must be positive");
  for (int label : y) {
    if (label != 1 && label != -1) throw ValidationError("binary labels must be +1 or -1");
  }
  const double C = params.C;

  BinarySvmSolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);

  // Seeded visiting order decides ties during working-set selection.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(params.seed);
  stable_shuffle(std::span<std::size_t>(order), rng);

  auto& alpha = sol.alpha;
  auto in_up = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0.0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < C);
  };

  const std::size_t max_iter =
      params.max_iterations ? params.max_iterations : std::max<std::size_t>(10'000'000, 100 * n);

  while (sol.iterations < max_iter) {
    // i: maximal violator from the "up" set.
    double m = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t : order) {
      if (in_up(t) && -y[t] * grad[t] > m) {
        m = -y[t] * grad[t];
        i = t;
      }
    }
    if (i == n) {
      sol.converged = true;
      break;
    }
    // j: second-order choice among "low" violators, plus the exact M for the
    // stopping rule.
    auto row_i = rows.row(i);
    const double kii = rows.diag(i);
    double big_m = std::numeric_limits<double>::infinity();
    double best_gain = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t : order) {
      if (!in_low(t)) continue;
      const double v = -y[t] * grad[t];
      big_m = std::min(big_m, v);
      const double b = m - v;
      if (b > 0.0) {
        double a = kii + rows.diag(t) - 2.0 * row_i[t];
        if (a <= 0.0) a = kTau;
        const double gain = -(b * b) / a;
        if (gain < best_gain) {
          best_gain = gain;
          j = t;
        }
      }
    }
    if (j == n || m - big_m < params.tolerance) {
      sol.converged = true;
      break;
    }
    ++sol.iterations;

    // Step along d with d_i = y_i, d_j = -y_j, which keeps y'alpha fixed.
    row_i = rows.row(i);  // may have been evicted by a cache miss elsewhere
    std::vector<double> ki(row_i.begin(), row_i.end());
    auto row_j = rows.row(j);
    const double slope = y[i] * grad[i] - y[j] * grad[j];  // < 0 for a violating pair
    const double curvature = kii + rows.diag(j) - 2.0 * ki[j];
    const double room_i = y[i] == 1 ? C - alpha[i] : alpha[i];
    const double room_j = y[j] == 1 ? alpha[j] : C - alpha[j];
    const double step_max = std::min(room_i, room_j);
    // Non-positive curvature: the objective decreases all the way to the box
    // edge, so take the full feasible step.
    const double step = curvature > 0.0 ? std::min(-slope / curvature, step_max) : step_max;
    if (!(step > 0.0)) {
      sol.converged = true;
      break;
    }

    alpha[i] += y[i] * step;
    alpha[j] -= y[j] * step;
    if (step == room_i) alpha[i] = y[i] == 1 ? C : 0.0;
    if (step == room_j) alpha[j] = y[j] == 1 ? 0.0 : C;
    alpha[i] = std::clamp(alpha[i], 0.0, C);
    alpha[j] = std::clamp(alpha[j], 0.0, C);

    for (std::size_t t = 0; t < n; ++t) grad[t] += step * y[t] * (ki[t] - row_j[t]);
  }

  // Offset from free vectors, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= C) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  sol.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  return sol;
}

}  // namespace

BinarySvmSolution solve_binary_svm(std::span<const double> kernel, std::span<const int> labels,
                                   const SvmParams& params) {
  const std::size_t n = labels.size();
  if (kernel.size() != n * n) throw ValidationError("kernel matrix must be n x n");
  KernelRows rows(kernel, n);
  return solve(rows, labels, params);
}

std::vector<KernelSvmModel> train_ovr_svm(std::span<const LabeledVector> train,
                                          const SvmParams& params) {
  std::set<std::string> classes;
  for (const auto& ex : train) classes.insert(ex.label);
  if (classes.size() < 2) throw ValidationError("one-vs-rest training needs at least two classes");
  if (!train.empty()) {
    const auto kind = kind_of(train.front().vector);
    for (const auto& ex : train) {
      if (kind_of(ex.vector) != kind) throw ValidationError("mixed vector representations");
    }
  }

  std::vector<DocVector> vectors;
  vectors.reserve(train.size());
  for (const auto& ex : train) vectors.push_back(ex.vector);
  KernelRows rows(vectors);

  std::vector<KernelSvmModel> models;
  std::vector<int> y(train.size());
  for (const auto& label : classes) {
    for (std::size_t t = 0; t < train.size(); ++t) y[t] = train[t].label == label ? 1 : -1;
    auto sol = solve(rows, y, params);

    KernelSvmModel model;
    model.label = label;
    model.C = params.C;
    model.rho = sol.rho;
    model.iterations = sol.iterations;
    model.converged = sol.converged;
    for (std::size_t t = 0; t < train.size(); ++t) {
      if (sol.alpha[t] > 0.0) {
        model.support_ids.push_back(train[t].id);
        model.support_vectors.push_back(train[t].vector);
        model.coefficients.push_back(y[t] * sol.alpha[t]);
      }
    }
    models.push_back(std::move(model));
  }
  return models;
}

double KernelSvmModel::decision(const DocVector& x) const {
  double f = -rho;
  for (std::size_t k = 0; k < support_vectors.size(); ++k) {
    f += coefficients[k] * triangular_kernel(support_vectors[k], x);
  }
  return f;
}

namespace {

std::string argmax_label(std::span<const KernelSvmModel> models, std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t m = 1; m < models.size(); ++m) {
    if (scores[m] > scores[best] ||
        (scores[m] == scores[best] && models[m].label < models[best].label)) {
      best = m;
    }
  }
  return models[best].label;
}

}  // namespace

std::string predict(std::span<const KernelSvmModel> models, const DocVector& x) {
  if (models.empty()) throw ValidationError("predict: no models");
  std::vector<double> scores;
  scores.reserve(models.size());
  for (const auto& m : models) scores.push_back(m.decision(x));
  return argmax_label(models, scores);
}

std::vector<std::string> predict_batch(std::span<const KernelSvmModel> models,
                                       std::span<const DocVector> xs) {
  if (models.empty()) throw ValidationError("predict: no models");
  std::unordered_map<std::string, std::size_t> unique;
  std::vector<const DocVector*> sv;
  std::vector<std::vector<std::size_t>> refs(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t k = 0; k < models[m].support_ids.size(); ++k) {
      auto [it, inserted] = unique.try_emplace(models[m].support_ids[k], sv.size());
      if (inserted) sv.push_back(&models[m].support_vectors[k]);
      refs[m].push_back(it->second);
    }
  }
  std::vector<std::string> labels;
  labels.reserve(xs.size());
  std::vector<double> kvals(sv.size());
  std::vector<double> scores(models.size());
  for (const auto& x : xs) {
    for (std::size_t s = 0; s < sv.size(); ++s) kvals[s] = triangular_kernel(*sv[s], x);
    for (std::size_t m = 0; m < models.size(); ++m) {
      double f = -models[m].rho;
      for (std::size_t k = 0; k < refs[m].size(); ++k) {
        f += models[m].coefficients[k] * kvals[refs[m][k]];
      }
      scores[m] = f;
    }
    labels.push_back(argmax_label(models, scores));
  }
  return labels;
}

nlohmann::json KernelSvmModel::to_json() const {
  return {{"label", label},
          {"C", C},
          {"rho", rho},
          {"iterations", iterations},
          {"converged", converged},
          {"support_ids", support_ids},
          {"coefficients", coefficients}};
}

nlohmann::json models_to_json(std::span<const KernelSvmModel> models) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : models) arr.push_back(m.to_json());
  return {{"kernel", "triangular"}, {"scheme", "one-vs-rest"}, {"models", std::move(arr)}};
}

std::vector<KernelSvmModel> models_from_json(const nlohmann::json& doc, const VectorSource& vectors) {
  if (doc.value("kernel", "") != "triangular") {
    throw ValidationError("model file: unsupported kernel");
  }
  std::vector<KernelSvmModel> models;
  try {
    for (const auto& jm : doc.at("models")) {
      KernelSvmModel m;
      m.label = jm.at("label").get<std::string>();
      m.C = jm.at("C").get<double>();
      m.rho = jm.at("rho").get<double>();
      m.iterations = jm.value("iterations", std::size_t{0});
      m.converged = jm.value("converged", true);
      m.support_ids = jm.at("support_ids").get<std::vector<std::string>>();
      m.coefficients = jm.at("coefficients").get<std::vector<double>>();
      if (m.support_ids.size() != m.coefficients.size()) {
        throw ValidationError("model file: support id / coefficient count mismatch");
      }
      for (const auto& id : m.support_ids) {
        const DocVector* v = vectors.find(id);
        if (!v) throw MissingResourceError("model file: no vector for support id " + id);
        m.support_vectors.push_back(*v);
      }
      for (double c : m.coefficients) {
        if (std::abs(c) > m.C * (1.0 + 1e-12)) {
          throw ValidationError("model file: coefficient exceeds C");
        }
      }
      models.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model file: ") + e.what());
  }
  return models;
}

}  // namespace fsd
