#include "mcfair/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mcfair/error.hpp"
#include "mcfair/io.hpp"

namespace mcfair {

namespace {

constexpr double kZero = 1e-9;

// Max over unordered pairs of the mean absolute difference of per-group
// vectors, restricted to entries observed in both groups of a pair.
double max_pairwise_gap(const Eigen::MatrixXd& values, const Eigen::MatrixXd& observed) {
  double worst = 0.0;
  const auto G = values.rows();
  for (Eigen::Index a = 0; a < G; ++a) {
    for (Eigen::Index b = a + 1; b < G; ++b) {
      const Eigen::ArrayXd mask = observed.row(a).array() * observed.row(b).array();
      const double count = mask.sum();
      if (count == 0.0) continue;
      const double gap = ((values.row(a) - values.row(b)).array().abs() * mask.transpose()).sum();
      worst = std::max(worst, gap / count);
    }
  }
  return worst;
}

// Flattens w[a] into row a, column i*C + j; the observation mask of entry
// (i, j) is that of true class j.
Eigen::MatrixXd flatten(const MatrixStack& w) {
  const auto G = static_cast<Eigen::Index>(w.size());
  const auto C = G > 0 ? w[0].rows() : 0;
  Eigen::MatrixXd out(G, C * C);
  for (Eigen::Index a = 0; a < G; ++a)
    for (Eigen::Index i = 0; i < C; ++i)
      for (Eigen::Index j = 0; j < C; ++j) out(a, i * C + j) = w[a](i, j);
  return out;
}

Eigen::MatrixXd flatten_mask(const Eigen::MatrixXd& observed) {
  const auto G = observed.rows();
  const auto C = observed.cols();
  Eigen::MatrixXd out(G, C * C);
  for (Eigen::Index a = 0; a < G; ++a)
    for (Eigen::Index i = 0; i < C; ++i)
      for (Eigen::Index j = 0; j < C; ++j) out(a, i * C + j) = observed(a, j);
  return out;
}

double masked_disparity(const MatrixStack& w, const Eigen::MatrixXd& observed) {
  const auto flat = flatten(w);
  const auto mask = flatten_mask(observed);
  const auto G = flat.rows();
  double total = 0.0;
  int pairs = 0;
  for (Eigen::Index a = 0; a < G; ++a) {
    for (Eigen::Index b = a + 1; b < G; ++b) {
      const Eigen::ArrayXd m = mask.row(a).array() * mask.row(b).array();
      const double count = m.sum();
      if (count == 0.0) continue;
      total += ((flat.row(a) - flat.row(b)).array().abs() * m.transpose()).sum() / count;
      ++pairs;
    }
  }
  return pairs > 0 ? total / pairs : 0.0;
}

Eigen::MatrixXd diagonals(const MatrixStack& w) {
  const auto G = static_cast<Eigen::Index>(w.size());
  const auto C = G > 0 ? w[0].rows() : 0;
  Eigen::MatrixXd out(G, C);
  for (Eigen::Index a = 0; a < G; ++a) out.row(a) = w[a].diagonal().transpose();
  return out;
}

double criterion_measure(Criterion criterion, const EvaluationReport& r,
                         const Eigen::MatrixXd& observed) {
  switch (criterion) {
    case Criterion::TermByTerm:
      return max_pairwise_gap(flatten(r.w), flatten_mask(observed));
    case Criterion::ClasswiseOdds:
      return max_pairwise_gap(r.youden_j, observed);
    case Criterion::EqualOpportunity:
      return max_pairwise_gap(diagonals(r.w), observed);
    case Criterion::DemographicParity:
      return max_pairwise_gap(r.parity, Eigen::MatrixXd::Ones(r.parity.rows(), r.parity.cols()));
  }
  return 0.0;
}

// Fills the fields derivable from w, fdr, parity and class weights.
void summarize(EvaluationReport& r, const Eigen::MatrixXd& p_ya, const Eigen::MatrixXd& observed) {
  const auto G = static_cast<Eigen::Index>(r.w.size());
  const auto C = G > 0 ? r.w[0].rows() : 0;
  r.accuracy = 0.0;
  r.mean_tdr = 0.0;
  r.youden_j = Eigen::MatrixXd::Zero(G, C);
  for (Eigen::Index a = 0; a < G; ++a) {
    double tdr_sum = 0.0;
    double seen = 0.0;
    for (Eigen::Index j = 0; j < C; ++j) {
      r.accuracy += p_ya(a, j) * r.w[a](j, j);
      r.youden_j(a, j) = r.w[a](j, j) + (1.0 - r.fdr(a, j)) - 1.0;
      if (observed(a, j) > 0.0) {
        tdr_sum += r.w[a](j, j);
        seen += 1.0;
      }
    }
    r.mean_tdr += seen > 0.0 ? tdr_sum / seen : 0.0;
  }
  if (G > 0) r.mean_tdr /= static_cast<double>(G);
  r.disparity = masked_disparity(r.w, observed);
  r.sweep_measure = criterion_measure(r.criterion, r, observed);
}

}  // namespace

double disparity(const MatrixStack& w) {
  if (w.empty()) return 0.0;
  return masked_disparity(w, Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(w.size()),
                                                   w[0].cols()));
}

double percent_change(double before, double after) { return 100.0 * (after - before) / before; }

EvaluationReport evaluate_analytic(const AdjustmentPolicy& policy, const EmpiricalModel& em) {
  const int C = em.num_classes;
  const int G = em.num_groups;
  EvaluationReport r;
  r.criterion = policy.meta.criterion;
  r.w = analytic_confusions(policy, em);
  r.fdr.resize(G, C);
  r.parity.resize(G, C);
  r.brier = 0.0;
  r.trivial = false;
  for (int a = 0; a < G; ++a) {
    const Eigen::MatrixXd pv = policy.p[a] * em.v[a];
    r.fdr.row(a) = pv.diagonal().transpose();
    r.parity.row(a) = (policy.p[a] * em.p_yhat_given_a.row(a).transpose()).transpose();
    for (int i = 0; i < C; ++i)
      if ((r.w[a].row(i).array() < kZero).all()) r.trivial = true;
    // E[Σ_c (p(c, ŷ) - 1[y=c])²] over (y, ŷ) drawn from em.
    for (int k = 0; k < C; ++k) {
      const double sq = policy.p[a].col(k).squaredNorm();
      for (int j = 0; j < C; ++j)
        r.brier += em.p_ya(a, j) * em.z[a](k, j) * (sq - 2.0 * policy.p[a](j, k) + 1.0);
    }
  }
  summarize(r, em.p_ya, Eigen::MatrixXd::Ones(G, C));
  return r;
}

PredictionTally::PredictionTally(int num_classes, int num_groups)
    : c_(num_classes),
      g_(num_groups),
      counts_(num_groups, Eigen::MatrixXd::Zero(num_classes, num_classes)),
      emit_mass_(Eigen::MatrixXd::Zero(num_groups, num_classes)) {}

void PredictionTally::add(const AdjustmentPolicy& policy, const AdjustmentDataset& ds,
                          std::span<const int> y_adj) {
  if (y_adj.size() != ds.size()) throw std::invalid_argument("prediction count mismatch");
  if (ds.num_classes() != c_ || ds.num_groups() != g_ || policy.num_classes() != c_ ||
      policy.num_groups() != g_)
    throw std::invalid_argument("tally shape mismatch");
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const int a = ds.a[r];
    const int k = ds.y_hat[r];
    const int y = ds.y[r];
    counts_[a](y_adj[r], y) += 1.0;
    const auto column = policy.p[a].col(k);
    emit_mass_.row(a) += column.transpose();
    brier_sum_ += column.squaredNorm() - 2.0 * column(y) + 1.0;
  }
  rows_ += ds.size();
}

EvaluationReport PredictionTally::report(Criterion criterion) const {
  EvaluationReport r;
  r.criterion = criterion;
  const double N = static_cast<double>(rows_);
  r.w.assign(g_, Eigen::MatrixXd::Zero(c_, c_));
  r.fdr = Eigen::MatrixXd::Zero(g_, c_);
  r.parity = Eigen::MatrixXd::Zero(g_, c_);
  Eigen::MatrixXd p_ya = Eigen::MatrixXd::Zero(g_, c_);
  Eigen::MatrixXd observed = Eigen::MatrixXd::Zero(g_, c_);
  r.trivial = false;

  for (int a = 0; a < g_; ++a) {
    const Eigen::RowVectorXd cell = counts_[a].colwise().sum();
    const double n_a = cell.sum();
    for (int j = 0; j < c_; ++j) {
      p_ya(a, j) = N > 0 ? cell(j) / N : 0.0;
      if (cell(j) > 0.0) {
        observed(a, j) = 1.0;
        r.w[a].col(j) = counts_[a].col(j) / cell(j);
      }
    }
    for (int c = 0; c < c_; ++c) {
      const double not_c = n_a - cell(c);
      const double false_hits = counts_[a].row(c).sum() - counts_[a](c, c);
      r.fdr(a, c) = not_c > 0.0 ? false_hits / not_c : 0.0;
      r.parity(a, c) = n_a > 0.0 ? counts_[a].row(c).sum() / n_a : 0.0;
      if (n_a > 0.0 && emit_mass_(a, c) < kZero * n_a) r.trivial = true;
    }
  }
  r.brier = N > 0 ? brier_sum_ / N : 0.0;
  summarize(r, p_ya, observed);
  // Count directly so accuracy is an exact ratio of integers.
  double correct = 0.0;
  for (const auto& m : counts_) correct += m.trace();
  r.accuracy = N > 0 ? correct / N : 0.0;
  return r;
}

EvaluationReport evaluate_predictions(const AdjustmentPolicy& policy,
                                      const AdjustmentDataset& ds, std::span<const int> y_adj) {
  PredictionTally tally(policy.num_classes(), policy.num_groups());
  tally.add(policy, ds, y_adj);
  return tally.report(policy.meta.criterion);
}

EvaluationReport evaluate_sampled(const AdjustmentPolicy& policy,
                                  const AdjustmentDataset& holdout, std::uint64_t seed) {
  const AdjustmentDataset aligned = align_to_policy(holdout, policy);
  const auto y_adj = predict_rows(policy, aligned, seed);
  return evaluate_predictions(policy, aligned, y_adj);
}

double brier_score(const AdjustmentPolicy& policy, const AdjustmentDataset& ds) {
  double total = 0.0;
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const auto column = policy.p.at(ds.a[r]).col(ds.y_hat[r]);
    for (int c = 0; c < policy.num_classes(); ++c) {
      const double diff = column(c) - (ds.y[r] == c ? 1.0 : 0.0);
      total += diff * diff;
    }
  }
  return total / static_cast<double>(ds.size());
}

double sweep_measure(const AdjustmentPolicy& policy, const EmpiricalModel& em,
                     Criterion criterion) {
  AdjustmentPolicy relabeled = policy;
  relabeled.meta.criterion = criterion;
  return evaluate_analytic(relabeled, em).sweep_measure;
}

CrossvalResult crossval(const AdjustmentDataset& ds, int folds, std::uint64_t seed,
                        const ObjectiveSpec& obj, const FairnessSpec& spec, double smoothing,
                        const SolverOptions& options) {
  const SplitPlan plan = make_splits(ds, folds, seed);
  CrossvalResult result;
  result.folds = folds;
  result.seed = seed;

  PredictionTally pooled(ds.num_classes(), ds.num_groups());
  for (int f = 0; f < folds; ++f) {
    const auto train_rows = plan.train_rows(f);
    const auto test_rows = plan.test_rows(f);
    const AdjustmentDataset train = subset(ds, train_rows);
    const AdjustmentDataset test = subset(ds, test_rows);

    AdjustmentPolicy policy;
    try {
      const EmpiricalModel em = fit_empirical(train, smoothing);
      policy = fit_policy(em, obj, spec, ds.class_names, ds.group_names, options);
    } catch (const Error& e) {
      throw Error(e.kind(), "fold " + std::to_string(f) + ": " + e.what());
    }
    policy.meta.training_n = train.size();
    policy.meta.seed = seed;

    const auto y_adj = predict_rows(policy, test, seed, test_rows);
    PredictionTally tally(ds.num_classes(), ds.num_groups());
    tally.add(policy, test, y_adj);
    pooled.add(policy, test, y_adj);

    CrossvalFold fold;
    fold.fold = f;
    fold.train_n = train.size();
    fold.test_n = test.size();
    fold.objective_value = policy.meta.objective_value;
    fold.iterations = policy.meta.iterations;
    fold.report = tally.report(spec.criterion);
    result.fold_results.push_back(std::move(fold));
  }

  AdjustmentPolicy blackbox = identity_policy(ds.class_names, ds.group_names);
  blackbox.meta.criterion = spec.criterion;
  result.blackbox = evaluate_predictions(blackbox, ds, ds.y_hat);
  result.pooled = pooled.report(spec.criterion);
  result.accuracy_change_pct = percent_change(result.blackbox.accuracy, result.pooled.accuracy);
  result.mean_tdr_change_pct = percent_change(result.blackbox.mean_tdr, result.pooled.mean_tdr);
  result.disparity_change_pct =
      percent_change(result.blackbox.disparity, result.pooled.disparity);
  return result;
}

std::vector<double> sweep_epsilons() {
  std::vector<double> eps;
  for (int i = 0; i <= 100; ++i) eps.push_back(static_cast<double>(i) / 100.0);
  return eps;
}

std::vector<SweepRow> sweep(const AdjustmentDataset& ds, const EmpiricalModel& em,
                            const ObjectiveSpec& obj, Criterion criterion,
                            const SolverOptions& options) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRow> rows;
  for (double eps : sweep_epsilons()) {
    SweepRow row;
    row.epsilon = eps;
    row.criterion = criterion;
    const AssembledLP lp = assemble(em, obj, FairnessSpec::with_default_pairing(criterion, eps));
    const LPSolution sol = solve(lp.program, options);
    row.status = sol.status;
    if (sol.status != SolveStatus::Optimal) {
      row.objective_value = row.brier = row.sweep_measure = row.accuracy = row.mean_tdr = nan;
      rows.push_back(row);
      continue;
    }
    const AdjustmentPolicy policy = from_solution(lp, sol, ds.class_names, ds.group_names);
    const EvaluationReport report = evaluate_analytic(policy, em);
    row.objective_value = sol.objective;
    row.brier = brier_score(policy, ds);
    row.sweep_measure = report.sweep_measure;
    row.accuracy = report.accuracy;
    row.mean_tdr = report.mean_tdr;
    row.trivial = report.trivial;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << "epsilon,criterion,objective_value,brier,sweep_measure,accuracy,mean_tdr,trivial,status\n";
  for (const auto& r : rows) {
    out << io::format_double(r.epsilon) << ',' << to_string(r.criterion) << ','
        << io::format_double(r.objective_value) << ',' << io::format_double(r.brier) << ','
        << io::format_double(r.sweep_measure) << ',' << io::format_double(r.accuracy) << ','
        << io::format_double(r.mean_tdr) << ',' << (r.trivial ? 1 : 0) << ','
        << to_string(r.status) << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const EvaluationReport& r) {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& m : r.w) w.push_back(matrix_to_json(m));
  return {
      {"accuracy", r.accuracy},
      {"mean_tdr", r.mean_tdr},
      {"disparity", r.disparity},
      {"brier", r.brier},
      {"trivial", r.trivial},
      {"criterion", std::string(to_string(r.criterion))},
      {"sweep_measure", r.sweep_measure},
      {"fdr", matrix_to_json(r.fdr)},
      {"youden_j", matrix_to_json(r.youden_j)},
      {"parity", matrix_to_json(r.parity)},
      {"w", std::move(w)},
  };
}

nlohmann::json to_json(const CrossvalResult& result) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : result.fold_results) {
    folds.push_back({
        {"fold", f.fold},
        {"train_n", f.train_n},
        {"test_n", f.test_n},
        {"objective_value", f.objective_value},
        {"iterations", f.iterations},
        {"report", to_json(f.report)},
    });
  }
  return {
      {"folds", result.folds},
      {"seed", result.seed},
      {"fold_reports", std::move(folds)},
      {"blackbox", to_json(result.blackbox)},
      {"pooled", to_json(result.pooled)},
      {"accuracy_change_pct", result.accuracy_change_pct},
      {"mean_tdr_change_pct", result.mean_tdr_change_pct},
      {"disparity_change_pct", result.disparity_change_pct},
  };
}

}  // namespace mcfair
