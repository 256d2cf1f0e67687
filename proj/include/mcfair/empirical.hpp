#pragma once

#include <Eigen/Dense>
#include <vector>

#include "json.hpp"

#include "mcfair/dataset.hpp"

namespace mcfair {

/// Stack of per-group C×C matrices, indexed by group.
using MatrixStack = std::vector<Eigen::MatrixXd>;

/// Empirical distributions estimated from an AdjustmentDataset.
///
/// Orientation:
///   z[a](k, j)             = Pr(Ŷ=k | Y=j, A=a)   (columns are true classes)
///   v[a](j, c)             = mixture of the columns c' != c of z[a],
///                            weighted by Pr(Y=c', A=a)
///   p_ya(a, j)             = Pr(Y=j, A=a)
///   p_yhat_given_a(a, k)   = Pr(Ŷ=k | A=a)
struct EmpiricalModel {
  int num_classes = 0;
  int num_groups = 0;
  double smoothing = 0.0;
  Eigen::VectorXd p_a;
  Eigen::MatrixXd p_ya;
  MatrixStack z;
  MatrixStack v;
  Eigen::MatrixXd p_yhat_given_a;
  Eigen::MatrixXi n_cells;
};

/// Estimates all distributions from counts. With smoothing s > 0, s is added
/// to every count of each conditional distribution (Ŷ|Y,A; Y|A; Ŷ|A) before
/// normalizing, and p_ya is formed as Pr(A) · smoothed Pr(Y|A).
///
/// Throws EstimationError on an empty group, or on an empty (Y, A) cell when
/// smoothing is zero.
EmpiricalModel fit_empirical(const AdjustmentDataset& ds, double smoothing = 0.0);

/// v[a](j, c) = Σ_{c'≠c} z[a](j, c') Pr(Y=c', A=a) / Pr(Y≠c, A=a).
/// Throws EstimationError naming the group when Pr(Y≠c, A=a) = 0.
MatrixStack build_v(const MatrixStack& z, const Eigen::MatrixXd& p_ya);

/// Debug dump: every matrix as an array of rows, stacks indexed by group.
nlohmann::json to_json(const EmpiricalModel& em);

/// Row-major nested arrays.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

}  // namespace mcfair
