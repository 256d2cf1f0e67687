#pragma once

#include <Eigen/Dense>
#include <string_view>

namespace mcfair {

/// min cᵀx  s.t.  a_eq x = b_eq,  a_ub x ≤ b_ub,  lower ≤ x ≤ upper.
///
/// Lower bounds must be finite; upper bounds may be +inf. Either constraint
/// block may have zero rows (but must have `c.size()` columns).
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int num_vars() const noexcept { return static_cast<int>(c.size()); }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(SolveStatus status) noexcept;

struct SolverOptions {
  /// Optimality tolerance on reduced costs and feasibility tolerance for phase 1.
  double tol = 1e-9;
  int max_iter = 20000;
};

struct LPSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  int iterations = 0;
  /// Row duals from the final basis, equality rows first, then ub rows.
  Eigen::VectorXd duals;
};

/// Two-phase bounded-variable revised simplex on a dense explicit basis
/// inverse. Pricing is Dantzig (largest reduced cost, lowest index on ties)
/// and falls back to Bland's rule while pivots stay degenerate, so identical
/// inputs always produce identical vertices.
LPSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

/// Lagrangian lower bound bᵀy + Σ_j min over [l_j, u_j] of d_j x_j, with d
/// the reduced costs implied by `sol.duals`. Returns -inf when some d_j < 0
/// meets an infinite upper bound.
double dual_bound(const LinearProgram& lp, const LPSolution& sol);

/// Max-norm equality residual and max ub / bound violation of x.
struct Residuals {
  double eq = 0.0;
  double ub = 0.0;
  double bounds = 0.0;
};
Residuals residuals(const LinearProgram& lp, const Eigen::VectorXd& x);

}  // namespace mcfair
