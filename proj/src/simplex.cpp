#include "mcfair/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mcfair {

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
    case SolveStatus::IterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;
constexpr double kRatioTie = 1e-12;
constexpr int kRefactorEvery = 50;
constexpr int kStallLimit = 20;

enum class VarState : unsigned char { Lower, Upper, Basic };

// Column layout of the working matrix:
//   [0, n)                 structural variables
//   [n, n + m_ub)          slacks of the ub rows, bounds [0, inf)
//   [n + m_ub, n + m_ub + m) one artificial per row
class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SolverOptions& opt)
      : lp_(lp), opt_(opt) {
    n_ = lp.num_vars();
    m_eq_ = static_cast<int>(lp.a_eq.rows());
    m_ub_ = static_cast<int>(lp.a_ub.rows());
    m_ = m_eq_ + m_ub_;
    total_ = n_ + m_ub_ + m_;

    a_ = Eigen::MatrixXd::Zero(m_, total_);
    if (m_eq_ > 0) a_.block(0, 0, m_eq_, n_) = lp.a_eq;
    if (m_ub_ > 0) {
      a_.block(m_eq_, 0, m_ub_, n_) = lp.a_ub;
      a_.block(m_eq_, n_, m_ub_, m_ub_).setIdentity();
    }
    b_.resize(m_);
    if (m_eq_ > 0) b_.head(m_eq_) = lp.b_eq;
    if (m_ub_ > 0) b_.tail(m_ub_) = lp.b_ub;

    lo_ = Eigen::VectorXd::Zero(total_);
    hi_ = Eigen::VectorXd::Constant(total_, kInf);
    lo_.head(n_) = lp.lower;
    hi_.head(n_) = lp.upper;
    cost_ = Eigen::VectorXd::Zero(total_);
    x_ = Eigen::VectorXd::Zero(total_);
    state_.assign(static_cast<std::size_t>(total_), VarState::Lower);
    basis_.assign(static_cast<std::size_t>(m_), -1);
  }

  LPSolution run() {
    LPSolution sol;
    for (int j = 0; j < n_; ++j) {
      if (lo_(j) > hi_(j)) {
        sol.status = SolveStatus::Infeasible;
        sol.x = lp_.lower;
        return sol;
      }
    }

    start_phase_one();
    SolveStatus status = iterate(sol.iterations);
    if (status != SolveStatus::Optimal) {
      return finish(sol, status == SolveStatus::Unbounded ? SolveStatus::Infeasible : status);
    }
    double infeasibility = 0.0;
    for (int r = 0; r < m_; ++r) infeasibility += x_(artificial(r));
    const double bmax = m_ > 0 ? b_.cwiseAbs().maxCoeff() : 0.0;
    if (infeasibility > 1e-9 * std::max(1.0, bmax)) {
      return finish(sol, SolveStatus::Infeasible);
    }

    start_phase_two();
    status = iterate(sol.iterations);
    return finish(sol, status);
  }

 private:
  int artificial(int row) const { return n_ + m_ub_ + row; }
  bool is_artificial(int var) const { return var >= n_ + m_ub_; }

  void start_phase_one() {
    for (int j = 0; j < n_; ++j) {
      if (!std::isfinite(lo_(j)))
        throw std::invalid_argument("simplex requires finite lower bounds");
      x_(j) = lo_(j);
    }
    const Eigen::VectorXd residual = b_ - a_.leftCols(n_) * x_.head(n_);
    binv_ = Eigen::MatrixXd::Zero(m_, m_);
    for (int r = 0; r < m_; ++r) {
      const int art = artificial(r);
      if (r >= m_eq_ && residual(r) >= 0.0) {
        const int slack = n_ + (r - m_eq_);
        basis_[r] = slack;
        state_[slack] = VarState::Basic;
        x_(slack) = residual(r);
        hi_(art) = 0.0;
        binv_(r, r) = 1.0;
      } else {
        const double sign = residual(r) >= 0.0 ? 1.0 : -1.0;
        a_(r, art) = sign;
        basis_[r] = art;
        state_[art] = VarState::Basic;
        x_(art) = std::abs(residual(r));
        cost_(art) = 1.0;
        binv_(r, r) = sign;
      }
    }
  }

  void start_phase_two() {
    for (int r = 0; r < m_; ++r) hi_(artificial(r)) = 0.0;

    // Drive basic artificials out wherever some non-artificial column has a
    // usable entry in their row. Rows with none are redundant; their
    // artificial stays basic, pinned to zero.
    for (int r = 0; r < m_; ++r) {
      if (!is_artificial(basis_[r])) continue;
      for (int j = 0; j < n_ + m_ub_; ++j) {
        if (state_[j] == VarState::Basic) continue;
        if (std::abs(binv_.row(r).dot(a_.col(j))) <= 1e-7) continue;
        const Eigen::VectorXd alpha = binv_ * a_.col(j);
        const int leaving = basis_[r];
        pivot(r, alpha);
        basis_[r] = j;
        state_[j] = VarState::Basic;
        state_[leaving] = VarState::Lower;
        x_(leaving) = 0.0;
        break;
      }
    }
    for (int r = 0; r < m_; ++r) {
      const int art = artificial(r);
      if (state_[art] != VarState::Basic) x_(art) = 0.0;
    }
    refactor();

    cost_.setZero();
    cost_.head(n_) = lp_.c;
  }

  void pivot(int row, const Eigen::VectorXd& alpha) {
    binv_.row(row) /= alpha(row);
    for (int i = 0; i < m_; ++i) {
      if (i == row || alpha(i) == 0.0) continue;
      binv_.row(i) -= alpha(i) * binv_.row(row);
    }
  }

  void refactor() {
    if (m_ == 0) return;
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (int r = 0; r < m_; ++r) basis_matrix.col(r) = a_.col(basis_[r]);
    binv_ = basis_matrix.partialPivLu().inverse();

    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < total_; ++j) {
      if (state_[j] != VarState::Basic && x_(j) != 0.0) rhs -= a_.col(j) * x_(j);
    }
    const Eigen::VectorXd xb = binv_ * rhs;
    for (int r = 0; r < m_; ++r) x_(basis_[r]) = xb(r);
  }

  Eigen::RowVectorXd duals() const {
    Eigen::RowVectorXd cb(m_);
    for (int r = 0; r < m_; ++r) cb(r) = cost_(basis_[r]);
    return cb * binv_;
  }

  SolveStatus iterate(int& iterations) {
    int since_refactor = 0;
    int stall = 0;
    bool bland = false;
    while (true) {
      if (iterations >= opt_.max_iter) return SolveStatus::IterationLimit;
      if (since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }

      const Eigen::RowVectorXd y = duals();
      int entering = -1;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == VarState::Basic || lo_(j) == hi_(j)) continue;
        const double d = cost_(j) - y.dot(a_.col(j));
        const bool eligible = (state_[j] == VarState::Lower && d < -opt_.tol) ||
                              (state_[j] == VarState::Upper && d > opt_.tol);
        if (!eligible) continue;
        if (bland) {
          entering = j;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
        }
      }
      if (entering < 0) return SolveStatus::Optimal;

      const double dir = state_[entering] == VarState::Lower ? 1.0 : -1.0;
      const Eigen::VectorXd alpha = binv_ * a_.col(entering);

      // Step length limits from each basic variable's bounds.
      std::vector<double> limits(static_cast<std::size_t>(m_), kInf);
      double min_limit = kInf;
      for (int r = 0; r < m_; ++r) {
        if (std::abs(alpha(r)) <= kPivotTol) continue;
        const int var = basis_[r];
        const double delta = -dir * alpha(r);
        double limit;
        if (delta < 0.0) {
          limit = (x_(var) - lo_(var)) / -delta;
        } else {
          if (!std::isfinite(hi_(var))) continue;
          limit = (hi_(var) - x_(var)) / delta;
        }
        limit = std::max(limit, 0.0);
        limits[r] = limit;
        min_limit = std::min(min_limit, limit);
      }
      int leave_row = -1;
      for (int r = 0; r < m_; ++r) {
        if (!(limits[r] <= min_limit + kRatioTie)) continue;
        if (leave_row < 0) {
          leave_row = r;
        } else if (bland) {
          if (basis_[r] < basis_[leave_row]) leave_row = r;
        } else {
          const double cur = std::abs(alpha(leave_row));
          const double cand = std::abs(alpha(r));
          if (cand > cur || (cand == cur && basis_[r] < basis_[leave_row])) leave_row = r;
        }
      }

      const double flip = hi_(entering) - lo_(entering);
      if (leave_row < 0 && !std::isfinite(flip)) return SolveStatus::Unbounded;

      const bool bound_flip = leave_row < 0 || flip <= limits[leave_row];
      const double step = bound_flip ? flip : limits[leave_row];

      for (int r = 0; r < m_; ++r) x_(basis_[r]) -= dir * step * alpha(r);

      if (bound_flip) {
        state_[entering] =
            state_[entering] == VarState::Lower ? VarState::Upper : VarState::Lower;
        x_(entering) = state_[entering] == VarState::Lower ? lo_(entering) : hi_(entering);
      } else {
        x_(entering) += dir * step;
        const int leaving = basis_[leave_row];
        const bool to_lower = -dir * alpha(leave_row) < 0.0;
        state_[leaving] = to_lower ? VarState::Lower : VarState::Upper;
        x_(leaving) = to_lower ? lo_(leaving) : hi_(leaving);
        pivot(leave_row, alpha);
        basis_[leave_row] = entering;
        state_[entering] = VarState::Basic;
      }

      ++iterations;
      ++since_refactor;
      if (step <= kDegenerateStep) {
        if (++stall >= kStallLimit) bland = true;
      } else {
        stall = 0;
        bland = false;
      }
    }
  }

  LPSolution& finish(LPSolution& sol, SolveStatus status) {
    refactor();
    sol.status = status;
    sol.x = x_.head(n_);
    sol.objective = lp_.c.dot(sol.x);
    sol.duals = m_ > 0 ? Eigen::VectorXd(duals().transpose()) : Eigen::VectorXd();
    return sol;
  }

  const LinearProgram& lp_;
  SolverOptions opt_;
  int n_ = 0, m_eq_ = 0, m_ub_ = 0, m_ = 0, total_ = 0;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_, lo_, hi_, cost_, x_;
  Eigen::MatrixXd binv_;
  std::vector<int> basis_;
  std::vector<VarState> state_;
};

void check_shapes(const LinearProgram& lp) {
  const auto n = lp.c.size();
  const bool ok = lp.lower.size() == n && lp.upper.size() == n &&
                  (lp.a_eq.rows() == 0 || lp.a_eq.cols() == n) &&
                  (lp.a_ub.rows() == 0 || lp.a_ub.cols() == n) &&
                  lp.a_eq.rows() == lp.b_eq.size() && lp.a_ub.rows() == lp.b_ub.size();
  if (!ok) throw std::invalid_argument("linear program has inconsistent dimensions");
}

}  // namespace

LPSolution solve(const LinearProgram& lp, const SolverOptions& options) {
  check_shapes(lp);
  if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  // Normalize empty blocks so the working matrix can be assembled blockwise.
  LinearProgram normalized = lp;
  if (normalized.a_eq.rows() == 0) normalized.a_eq.resize(0, lp.c.size());
  if (normalized.a_ub.rows() == 0) normalized.a_ub.resize(0, lp.c.size());
  RevisedSimplex simplex(normalized, options);
  return simplex.run();
}

double dual_bound(const LinearProgram& lp, const LPSolution& sol) {
  const auto m_eq = lp.a_eq.rows();
  const auto m_ub = lp.a_ub.rows();
  Eigen::VectorXd y_eq = sol.duals.head(m_eq);
  Eigen::VectorXd y_ub = sol.duals.tail(m_ub).cwiseMin(0.0);

  Eigen::VectorXd d = lp.c;
  double bound = 0.0;
  if (m_eq > 0) {
    d -= lp.a_eq.transpose() * y_eq;
    bound += lp.b_eq.dot(y_eq);
  }
  if (m_ub > 0) {
    d -= lp.a_ub.transpose() * y_ub;
    bound += lp.b_ub.dot(y_ub);
  }
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (d(j) >= 0.0) {
      bound += d(j) * lp.lower(j);
    } else {
      if (!std::isfinite(lp.upper(j))) return -kInf;
      bound += d(j) * lp.upper(j);
    }
  }
  return bound;
}

Residuals residuals(const LinearProgram& lp, const Eigen::VectorXd& x) {
  Residuals res;
  if (lp.a_eq.rows() > 0) res.eq = (lp.a_eq * x - lp.b_eq).cwiseAbs().maxCoeff();
  if (lp.a_ub.rows() > 0) res.ub = std::max(0.0, (lp.a_ub * x - lp.b_ub).maxCoeff());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    res.bounds = std::max({res.bounds, lp.lower(j) - x(j), x(j) - lp.upper(j)});
  }
  return res;
}

}  // namespace mcfair
