#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fsd/vector_source.hpp"
#include "fsd/vectors.hpp"

namespace fsd {

/// k(x, y) = 1 - ||x - y||. Works on sparse and dense vectors alike.
double triangular_kernel(const DocVector& x, const DocVector& y);

struct LabeledVector {
  std::string id;
  std::string label;
  DocVector vector;
};

struct SvmParams {
  double C = 1.0;
  double tolerance = 1e-3;  // KKT violation gap at termination
  std::uint64_t seed = 0;
  std::size_t max_iterations = 0;  // 0 = automatic (scales with n)
};

/// One binary one-vs-rest model: f(x) = sum_i coef_i k(sv_i, x) - rho,
/// with coef_i = y_i * alpha_i.
struct KernelSvmModel {
  std::string label;
  double C = 1.0;
  double rho = 0.0;
  std::vector<std::string> support_ids;
  std::vector<DocVector> support_vectors;
  std::vector<double> coefficients;
  std::size_t iterations = 0;
  bool converged = false;

  double decision(const DocVector& x) const;
  nlohmann::json to_json() const;  // support vectors referenced by id
};

/// Result of a binary dual solve, exposed for testing.
struct BinarySvmSolution {
  std::vector<double> alpha;
  double rho = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// SMO on min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0 with Q_ij = y_i y_j K_ij.
/// `kernel` is the full n x n row-major Gram matrix; labels are +1/-1.
BinarySvmSolution solve_binary_svm(std::span<const double> kernel,
                                   std::span<const int> labels, const SvmParams& params);

/// Gram matrix of the triangular kernel.
std::vector<double> triangular_gram(std::span<const DocVector> vectors);

std::vector<KernelSvmModel> train_ovr_svm(std::span<const LabeledVector> train,
                                          const SvmParams& params);

/// Label of the highest decision value; ties -> lexicographically smallest.
std::string predict(std::span<const KernelSvmModel> models, const DocVector& x);

/// predict() for many inputs; kernel values against support vectors shared
/// by several models (same id) are computed once per input.
std::vector<std::string> predict_batch(std::span<const KernelSvmModel> models,
                                       std::span<const DocVector> xs);

nlohmann::json models_to_json(std::span<const KernelSvmModel> models);
/// Rebuilds models, resolving support vector ids through `vectors`.
std::vector<KernelSvmModel> models_from_json(const nlohmann::json& doc,
                                             const VectorSource& vectors);

}  // namespace fsd
