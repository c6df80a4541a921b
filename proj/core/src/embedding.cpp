#include "fraudkit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraudkit/error.hpp"
#include "fraudkit/rng.hpp"

namespace fraudkit {

namespace {

constexpr std::size_t kMaxBisectionSteps = 64;
constexpr double kPerplexityTolerance = 1e-5;  // relative
constexpr std::size_t kKlRecordEvery = 50;

struct RowState {
  double entropy_bits;
  double sum;
};

// Unnormalised Gaussian weights for one row at precision beta; shifted distances
// keep the largest weight at exactly 1.
RowState evaluate_row(std::span<const double> shifted, std::size_t self, double beta,
                      std::span<double> weights) {
  double sum = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    if (j == self) {
      weights[j] = 0.0;
      continue;
    }
    const double w = std::exp(-beta * shifted[j]);
    weights[j] = w;
    sum += w;
    weighted += w * shifted[j];
  }
  const double entropy_nats = std::log(sum) + beta * weighted / sum;
  return {entropy_nats / std::numbers::ln2, sum};
}

void centre(Matrix& coords) {
  for (std::size_t c = 0; c < coords.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < coords.rows(); ++r) mean += coords(r, c);
    mean /= static_cast<double>(coords.rows());
    for (std::size_t r = 0; r < coords.rows(); ++r) coords(r, c) -= mean;
  }
}

double student_t_normaliser(const Matrix& coords) {
  const std::size_t n = coords.rows();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      total += 2.0 / (1.0 + squared_distance(coords.row(i), coords.row(j)));
    }
  }
  return total;
}

// KL(P || Q(coords)) without materialising Q.
double layout_kl(const Matrix& p, const Matrix& coords) {
  const std::size_t n = coords.rows();
  const double z = student_t_normaliser(coords);
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double q = std::max(1.0 / (1.0 + squared_distance(coords.row(i), coords.row(j))) / z,
                                kAffinityFloor);
      const double pij = std::max(p(i, j), kAffinityFloor);
      kl += pij * std::log(pij / q);
    }
  }
  return kl;
}

void gradient_into(const Matrix& p, const Matrix& coords, double exaggeration, Matrix& grad) {
  const std::size_t n = coords.rows();
  const std::size_t dim = coords.cols();
  const double z = student_t_normaliser(coords);
  std::fill(grad.values().begin(), grad.values().end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto yi = coords.row(i);
    auto gi = grad.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto yj = coords.row(j);
      const double w = 1.0 / (1.0 + squared_distance(yi, yj));
      const double coeff = 4.0 * (exaggeration * p(i, j) - w / z) * w;
      for (std::size_t c = 0; c < dim; ++c) gi[c] += coeff * (yi[c] - yj[c]);
    }
  }
}

}  // namespace

double row_perplexity(std::span<const double> row) {
  double h = 0.0;
  for (double v : row) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return std::exp2(h);
}

Matrix conditional_affinities(const Matrix& points, double perplexity) {
  const std::size_t n = points.rows();
  if (n < 4) fail(ErrorKind::Config, "affinity calibration needs at least 4 points, got " + std::to_string(n));
  if (!(perplexity > 1.0) || perplexity > static_cast<double>(n - 1)) {
    fail(ErrorKind::Config, "perplexity must lie in (1, " + std::to_string(n - 1) + "]");
  }
  const double target = std::log2(perplexity);
  Matrix out(n, n);
  std::vector<double> shifted(n);
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = INFINITY;
    double farthest = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      shifted[j] = squared_distance(points.row(i), points.row(j));
      nearest = std::min(nearest, shifted[j]);
      farthest = std::max(farthest, shifted[j]);
    }
    if (!(farthest > 0.0)) {
      fail(ErrorKind::Numerical, "perplexity calibration failed at row " + std::to_string(i) +
                                     ": every other point coincides with it");
    }
    double mean_shifted = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      shifted[j] -= nearest;
      mean_shifted += shifted[j];
    }
    mean_shifted /= static_cast<double>(n - 1);

    auto converged = [&](const RowState& s) {
      return std::abs(std::exp2(s.entropy_bits) - perplexity) / perplexity < kPerplexityTolerance;
    };

    // Entropy decreases in beta. Bracket by doubling/halving, then bisect in log space.
    double beta = mean_shifted > 0.0 ? 1.0 / mean_shifted : 1.0;
    RowState state = evaluate_row(shifted, i, beta, weights);
    double lo = 0.0;
    double hi = INFINITY;
    for (int expand = 0; expand < 2048 && !converged(state); ++expand) {
      if (state.entropy_bits > target) {
        lo = beta;
        if (std::isfinite(hi)) break;
        beta *= 2.0;
        if (beta > 1e300) break;
      } else {
        hi = beta;
        if (lo > 0.0) break;
        beta /= 2.0;
        if (beta < 1e-300) break;
      }
      state = evaluate_row(shifted, i, beta, weights);
    }
    for (std::size_t step = 0; step < kMaxBisectionSteps && !converged(state); ++step) {
      if (state.entropy_bits > target) {
        lo = beta;
      } else {
        hi = beta;
      }
      if (!std::isfinite(hi) || lo == 0.0) break;
      beta = std::sqrt(lo * hi);
      state = evaluate_row(shifted, i, beta, weights);
    }
    for (std::size_t j = 0; j < n; ++j) out(i, j) = weights[j] / state.sum;
  }
  return out;
}

Matrix symmetrize(const Matrix& conditional) {
  const std::size_t n = conditional.rows();
  if (conditional.cols() != n) fail(ErrorKind::ShapeMismatch, "symmetrize needs a square matrix");
  Matrix p(n, n);
  const double denom = 2.0 * static_cast<double>(n);
  bool floored = false;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = (conditional(i, j) + conditional(j, i)) / denom;
      if (v < kAffinityFloor) {
        v = kAffinityFloor;
        floored = true;
      }
      p(i, j) = v;
      p(j, i) = v;
      total += 2.0 * v;
    }
  }
  if (floored) {
    for (double& v : p.values()) v /= total;
  }
  return p;
}

Matrix student_t_affinities(const Matrix& coords) {
  const std::size_t n = coords.rows();
  const double z = student_t_normaliser(coords);
  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 1.0 / (1.0 + squared_distance(coords.row(i), coords.row(j))) / z;
      q(i, j) = v;
      q(j, i) = v;
    }
  }
  return q;
}

double kl_divergence(const Matrix& p, const Matrix& q) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    fail(ErrorKind::ShapeMismatch, "KL divergence of differently shaped matrices");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) {
      if (i == j) continue;
      const double pij = std::max(p(i, j), kAffinityFloor);
      const double qij = std::max(q(i, j), kAffinityFloor);
      kl += pij * std::log(pij / qij);
    }
  }
  return kl;
}

Matrix tsne_gradient(const Matrix& p, const Matrix& coords) {
  Matrix grad(coords.rows(), coords.cols());
  gradient_into(p, coords, 1.0, grad);
  return grad;
}

Embedding tsne_embed(const Matrix& points, const TsneConfig& config) {
  const std::size_t n = points.rows();
  if (n < 4) fail(ErrorKind::Config, "t-SNE needs at least 4 points, got " + std::to_string(n));
  if (n > config.max_points) {
    fail(ErrorKind::Config, "exact t-SNE is capped at " + std::to_string(config.max_points) +
                                " points (got " + std::to_string(n) + "); subsample the data first");
  }
  if (config.iterations == 0) fail(ErrorKind::Config, "t-SNE iterations must be positive");
  if (!(config.learning_rate > 0.0)) fail(ErrorKind::Config, "t-SNE learning rate must be positive");
  if (!(config.early_exaggeration_factor >= 1.0)) {
    fail(ErrorKind::Config, "early exaggeration factor must be >= 1");
  }
  if (!(config.momentum_initial >= 0.0 && config.momentum_initial < 1.0 &&
        config.momentum_final >= 0.0 && config.momentum_final < 1.0)) {
    fail(ErrorKind::Config, "t-SNE momentum values must lie in [0,1)");
  }
  const double perplexity = std::min(config.perplexity, static_cast<double>(n - 1) / 3.0);
  if (!(perplexity > 1.0)) {
    fail(ErrorKind::Config, "effective perplexity " + std::to_string(perplexity) +
                                " must exceed 1; more points are needed");
  }

  const Matrix p = symmetrize(conditional_affinities(points, perplexity));

  Embedding out;
  out.perplexity = perplexity;
  out.coords = Matrix(n, 2);
  Rng rng(config.seed);
  for (double& v : out.coords.values()) v = 1e-4 * rng.normal();
  centre(out.coords);

  Matrix grad(n, 2);
  Matrix update(n, 2);
  Matrix gains(n, 2, 1.0);
  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    if (iter % kKlRecordEvery == 0) {
      out.kl_history.push_back(layout_kl(p, out.coords));
      out.kl_iterations.push_back(iter);
    }
    const double exaggeration = iter < config.early_exaggeration_iters ? config.early_exaggeration_factor : 1.0;
    const double momentum = iter < config.momentum_switch_iter ? config.momentum_initial : config.momentum_final;
    gradient_into(p, out.coords, exaggeration, grad);

    auto g = grad.values();
    auto u = update.values();
    auto gain = gains.values();
    auto y = out.coords.values();
    for (std::size_t k = 0; k < g.size(); ++k) {
      gain[k] = (g[k] > 0.0) != (u[k] > 0.0) ? gain[k] + 0.2 : gain[k] * 0.8;
      gain[k] = std::max(gain[k], 0.01);
      u[k] = momentum * u[k] - config.learning_rate * gain[k] * g[k];
      y[k] += u[k];
    }
    centre(out.coords);
    for (double v : y) {
      if (!std::isfinite(v)) {
        fail(ErrorKind::Numerical, "t-SNE diverged at iteration " + std::to_string(iter));
      }
    }
  }
  out.kl_history.push_back(layout_kl(p, out.coords));
  out.kl_iterations.push_back(config.iterations);
  return out;
}

}  // namespace fraudkit
