#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "fraudkit/dataset.hpp"

namespace fraudkit {

// Logistic regression ------------------------------------------------------

struct LogisticConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 1000;
  double l2 = 0.0;
  std::uint64_t seed = 0;  // unused by the deterministic full-batch solver; kept for the artifact
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  double margin(std::span<const double> x) const noexcept;
  bool operator==(const LinearModel&) const = default;
};

struct LogisticModel {
  LinearModel linear;
  std::vector<double> predict_proba(const Matrix& x) const;
};

/// Full-batch gradient descent on mean BCE + (l2/2)|w|^2 from a zero start.
/// The L2 term is applied as a proximal (shrinkage) step so huge penalties stay stable.
LogisticModel fit_logistic_regression(const Dataset& train, const LogisticConfig& config);

// Linear SVM ---------------------------------------------------------------

struct SvmConfig {
  double lambda = 1e-3;
  std::size_t iterations = 100000;
  std::uint64_t seed = 0;
};

/// predict_proba is sigmoid(margin) so that the 0.5 threshold coincides with sign(margin).
struct SvmModel {
  LinearModel linear;
  std::vector<double> predict_proba(const Matrix& x) const;
};

/// Pegasos: stochastic subgradient steps of size 1/(lambda t) on the hinge loss,
/// with the bias handled as a regularised constant feature and the iterate
/// projected onto the ball of radius 1/sqrt(lambda).
SvmModel fit_linear_svm(const Dataset& train, const SvmConfig& config);

// k-nearest neighbours -----------------------------------------------------

struct KnnModel {
  Matrix points;
  Labels labels;
  std::size_t k = 5;
  std::vector<double> predict_proba(const Matrix& x) const;
};

/// Fraction of positive labels among the k nearest training rows of each query.
std::vector<double> knn_predict_proba(const Dataset& train, const Matrix& queries, std::size_t k);
KnnModel fit_knn(const Dataset& train, std::size_t k);

// Decision tree ------------------------------------------------------------

inline constexpr std::size_t kUnlimitedDepth = std::numeric_limits<std::size_t>::max();

struct TreeConfig {
  std::size_t max_depth = 8;
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;  // splits are exhaustive; kept for the artifact
};

struct TreeNode {
  // Internal nodes route x[feature] <= threshold to `left`.
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  bool leaf = true;
  double probability = 0.0;  // positive fraction of the training rows reaching the node
  std::size_t samples = 0;

  bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<double> predict_proba(const Matrix& x) const;
  std::size_t depth() const;
};

/// 1 - sum_c p_c^2 over the two classes.
double gini(std::size_t positives, std::size_t total) noexcept;

/// CART with Gini impurity. Every (feature, midpoint threshold) pair is scored;
/// ties go to the lower feature, then the lower threshold.
TreeModel fit_decision_tree(const Dataset& train, const TreeConfig& config);

}  // namespace fraudkit
