#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fraudkit/matrix.hpp"

namespace fraudkit {

/// Exact t-SNE settings. The defaults are the customary ones from the original method.
struct TsneConfig {
  double perplexity = 30.0;  // clamped to (n-1)/3 by tsne_embed
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration_factor = 12.0;
  std::size_t early_exaggeration_iters = 250;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;
  std::size_t momentum_switch_iter = 250;
  std::uint64_t seed = 0;
  std::size_t max_points = 5000;
};

struct Embedding {
  Matrix coords;                   // n x 2
  std::vector<double> kl_history;  // KL(P||Q) at iteration 0, every 50 iterations, and at the end
  std::vector<std::size_t> kl_iterations;
  double perplexity = 0.0;  // value actually used
};

/// Floor applied to joint affinities and to Q inside the KL objective.
inline constexpr double kAffinityFloor = 1e-12;

/// Row-conditional Gaussian affinities p_{j|i}; each row's bandwidth is found by
/// bisection so that 2^H(row) matches the perplexity. Requires n >= 4 and
/// 1 < perplexity <= n - 1.
Matrix conditional_affinities(const Matrix& points, double perplexity);

/// p_ij = (p_{j|i} + p_{i|j}) / 2n with off-diagonal entries floored at kAffinityFloor
/// (and the matrix renormalised when the floor fires).
Matrix symmetrize(const Matrix& conditional);

/// Student-t (one degree of freedom) joint affinities of a low-dimensional layout.
Matrix student_t_affinities(const Matrix& coords);

/// Sum over off-diagonal entries of p ln(p/q), both floored at kAffinityFloor.
double kl_divergence(const Matrix& p, const Matrix& q);

/// Exact gradient of KL(P||Q) with respect to the layout.
Matrix tsne_gradient(const Matrix& p, const Matrix& coords);

Embedding tsne_embed(const Matrix& points, const TsneConfig& config);

/// 2^(Shannon entropy in bits) of one probability row.
double row_perplexity(std::span<const double> row);

}  // namespace fraudkit
