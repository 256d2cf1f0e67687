#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mcfair/synth.hpp"

namespace mcfair {

struct RegressionTerm {
  std::string factor;
  std::string level;
  double coefficient = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct RegressionResult {
  /// Intercept first.
  std::vector<RegressionTerm> terms;
  /// (factor, dropped level) pairs.
  std::vector<std::pair<std::string, std::string>> reference_levels;
  double r_squared = 0.0;
  std::size_t observations = 0;
  int dof = 0;
  Eigen::VectorXd residuals;

  const RegressionTerm& term(const std::string& factor, const std::string& level) const;
};

/// Least squares via column-pivoted Householder QR with 95% t intervals on
/// (rows - columns) degrees of freedom. `names[c]` = (factor, level) of
/// column c. Throws std::invalid_argument when X is rank deficient.
RegressionResult ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const std::vector<std::pair<std::string, std::string>>& names,
                     double confidence = 0.95);

enum class Outcome { AccuracyChange, TdrChange };

/// One-hot design over the experiment's hyperparameters for the rows with
/// `groups` protected groups, references Unweighted / Equalized Odds /
/// No Minority / Balanced / Low (or Low One). Failed rows are skipped.
RegressionResult ols_fit(const std::vector<synth::ExperimentRow>& rows, int groups,
                         Outcome outcome);

/// Aligned text table with both outcomes side by side.
std::string format_regression_table(const RegressionResult& acc, const RegressionResult& tdr,
                                    int groups);

}  // namespace mcfair
