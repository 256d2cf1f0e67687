#pragma once

// Two-stage sampling oracle: ŷ ~ z(·, y), then y_adj ~ p(·, ŷ). Draws go
// through the same inverse-CDF sampler the library uses, but the stages are
// composed here rather than through W = P·Z.

#include <Eigen/Dense>
#include <cmath>

#include "mcfair/rng.hpp"

namespace oracle {

inline int draw_column(mcfair::rng::Engine& eng, const Eigen::MatrixXd& m, int col) {
  return static_cast<int>(mcfair::rng::sample_index(
      eng, [&](std::size_t i) { return m(static_cast<Eigen::Index>(i), col); },
      static_cast<std::size_t>(m.rows())));
}

/// Empirical W: `draws` samples for each true class column.
inline Eigen::MatrixXd simulate_w(const Eigen::MatrixXd& p, const Eigen::MatrixXd& z, int draws,
                                  mcfair::rng::Engine& eng) {
  const auto c = z.rows();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(c, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (int d = 0; d < draws; ++d) {
      const int k = draw_column(eng, z, static_cast<int>(j));
      counts(draw_column(eng, p, k), j) += 1.0;
    }
  return counts / draws;
}

/// Empirical Pr(Y_adj) for ŷ ~ p_yhat.
inline Eigen::VectorXd simulate_marginal(const Eigen::MatrixXd& p, const Eigen::VectorXd& p_yhat,
                                         int draws, mcfair::rng::Engine& eng) {
  const Eigen::MatrixXd col = p_yhat;
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(p.rows());
  for (int d = 0; d < draws; ++d) counts(draw_column(eng, p, draw_column(eng, col, 0))) += 1.0;
  return counts / draws;
}

/// Binomial z-score of an observed frequency against probability `prob`.
/// Degenerate probabilities must be hit exactly.
inline double z_score(double observed, double prob, int n) {
  const double var = prob * (1.0 - prob) / n;
  if (var <= 0.0) return observed == prob ? 0.0 : INFINITY;
  return std::abs(observed - prob) / std::sqrt(var);
}

}  // namespace oracle
