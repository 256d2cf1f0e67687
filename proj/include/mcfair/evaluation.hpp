#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcfair/dataset.hpp"
#include "mcfair/empirical.hpp"
#include "mcfair/fairness_lp.hpp"
#include "mcfair/policy.hpp"

namespace mcfair {

struct EvaluationReport {
  double accuracy = 0.0;
  /// Mean over groups of the mean diagonal of w[a].
  double mean_tdr = 0.0;
  /// w[a](i, j) = Pr(Y_adj=i | Y=j, A=a).
  MatrixStack w;
  /// fdr(a, c) = Pr(Y_adj=c | Y≠c, A=a).
  Eigen::MatrixXd fdr;
  /// parity(a, i) = Pr(Y_adj=i | A=a).
  Eigen::MatrixXd parity;
  /// youden_j(a, c) = TDR + (1 - FDR) - 1.
  Eigen::MatrixXd youden_j;
  /// Mean over unordered group pairs of the elementwise mean |w[a] - w[a']|.
  double disparity = 0.0;
  double brier = 0.0;
  /// Some class is never emitted for some group.
  bool trivial = false;
  Criterion criterion = Criterion::TermByTerm;
  /// Max over group pairs of the mean absolute difference of the criterion's
  /// metric object.
  double sweep_measure = 0.0;
};

/// Report from the model alone: w[a] = p[a] z[a], FDR = diag(p[a] v[a]),
/// Brier as its expectation under `em`. Uses policy.meta.criterion.
EvaluationReport evaluate_analytic(const AdjustmentPolicy& policy, const EmpiricalModel& em);

/// Samples Y_adj for every holdout row (row streams keyed by row position)
/// and reports empirical metrics.
EvaluationReport evaluate_sampled(const AdjustmentPolicy& policy,
                                  const AdjustmentDataset& holdout, std::uint64_t seed);

/// Empirical metrics for given adjusted labels. `ds` must already be encoded
/// against the policy's dictionaries.
EvaluationReport evaluate_predictions(const AdjustmentPolicy& policy,
                                      const AdjustmentDataset& ds, std::span<const int> y_adj);

/// Mean over rows of Σ_c (p[a](c, ŷ) - 1[y = c])².
double brier_score(const AdjustmentPolicy& policy, const AdjustmentDataset& ds);

double sweep_measure(const AdjustmentPolicy& policy, const EmpiricalModel& em,
                     Criterion criterion);

/// Mean over unordered pairs of the elementwise mean |w[a] - w[b]|.
double disparity(const MatrixStack& w);

/// Relative change in percent: 100 (after - before) / before.
double percent_change(double before, double after);

/// Accumulates adjusted predictions from one or more policies over rows of
/// one class/group space, then summarizes them as an EvaluationReport.
class PredictionTally {
 public:
  PredictionTally(int num_classes, int num_groups);

  void add(const AdjustmentPolicy& policy, const AdjustmentDataset& ds,
           std::span<const int> y_adj);
  EvaluationReport report(Criterion criterion) const;
  std::size_t rows() const noexcept { return rows_; }

 private:
  int c_;
  int g_;
  std::size_t rows_ = 0;
  double brier_sum_ = 0.0;
  MatrixStack counts_;            // counts_[a](i, j) = #{Y_adj=i, Y=j, A=a}
  Eigen::MatrixXd emit_mass_;     // emit_mass_(a, i) = Σ_rows p[a](i, ŷ)
};

struct CrossvalFold {
  int fold = 0;
  std::size_t train_n = 0;
  std::size_t test_n = 0;
  double objective_value = 0.0;
  int iterations = 0;
  EvaluationReport report;
};

struct CrossvalResult {
  int folds = 0;
  std::uint64_t seed = 0;
  std::vector<CrossvalFold> fold_results;
  /// Unadjusted blackbox predictions on the full dataset.
  EvaluationReport blackbox;
  /// All out-of-fold adjusted predictions together.
  EvaluationReport pooled;
  double accuracy_change_pct = 0.0;
  double mean_tdr_change_pct = 0.0;
  double disparity_change_pct = 0.0;
};

/// Fit on each training split, predict the held-out fold, pool the results.
/// Throws with the fold number when a split cannot be estimated or solved.
CrossvalResult crossval(const AdjustmentDataset& ds, int folds, std::uint64_t seed,
                        const ObjectiveSpec& obj, const FairnessSpec& spec,
                        double smoothing = 0.0, const SolverOptions& options = {});

struct SweepRow {
  double epsilon = 0.0;
  Criterion criterion = Criterion::TermByTerm;
  SolveStatus status = SolveStatus::Optimal;
  double objective_value = 0.0;
  double brier = 0.0;
  double sweep_measure = 0.0;
  double accuracy = 0.0;
  double mean_tdr = 0.0;
  bool trivial = false;
};

/// Relaxation values 0.00, 0.01, ..., 1.00.
std::vector<double> sweep_epsilons();

/// Solves on the full dataset at every relaxation value for one criterion.
/// Solver failures are recorded in the row status.
std::vector<SweepRow> sweep(const AdjustmentDataset& ds, const EmpiricalModel& em,
                            const ObjectiveSpec& obj, Criterion criterion,
                            const SolverOptions& options = {});

/// Header: epsilon,criterion,objective_value,brier,sweep_measure,accuracy,
/// mean_tdr,trivial,status
std::string sweep_csv(std::span<const SweepRow> rows);

nlohmann::json to_json(const EvaluationReport& report);
nlohmann::json to_json(const CrossvalResult& result);

}  // namespace mcfair
