#include "mcfair/regression.hpp"

#include <fmt/format.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace mcfair {

const RegressionTerm& RegressionResult::term(const std::string& factor,
                                             const std::string& level) const {
  for (const auto& t : terms)
    if (t.factor == factor && t.level == level) return t;
  throw std::out_of_range("no regression term " + factor + "/" + level);
}

RegressionResult ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const std::vector<std::pair<std::string, std::string>>& names,
                     double confidence) {
  const auto n = x.rows();
  const auto p = x.cols();
  if (y.size() != n || static_cast<Eigen::Index>(names.size()) != p)
    throw std::invalid_argument("design, outcome and names disagree in size");
  if (n <= p) throw std::invalid_argument("need more observations than parameters");

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < p) throw std::invalid_argument("design matrix is rank deficient");

  const Eigen::VectorXd beta = qr.solve(y);
  RegressionResult out;
  out.observations = static_cast<std::size_t>(n);
  out.dof = static_cast<int>(n - p);
  out.residuals = y - x * beta;

  const double rss = out.residuals.squaredNorm();
  const double tss = (y.array() - y.mean()).square().sum();
  out.r_squared = tss > 0.0 ? 1.0 - rss / tss : 1.0;
  const double sigma2 = rss / out.dof;

  // (XᵀX)⁻¹ = P R⁻¹ R⁻ᵀ Pᵀ for X P = Q R.
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd perm = qr.colsPermutation();
  const Eigen::MatrixXd cov_unscaled = perm * (r_inv * r_inv.transpose()) * perm.transpose();

  const boost::math::students_t dist(out.dof);
  const double t = boost::math::quantile(dist, 0.5 + confidence / 2.0);

  for (Eigen::Index c = 0; c < p; ++c) {
    RegressionTerm term;
    term.factor = names[c].first;
    term.level = names[c].second;
    term.coefficient = beta(c);
    term.std_error = std::sqrt(sigma2 * cov_unscaled(c, c));
    term.ci_low = term.coefficient - t * term.std_error;
    term.ci_high = term.coefficient + t * term.std_error;
    out.terms.push_back(term);
  }
  return out;
}

namespace {

std::string goal_label(Criterion c) {
  switch (c) {
    case Criterion::ClasswiseOdds:
      return "Equalized Odds";
    case Criterion::DemographicParity:
      return "Demographic Parity";
    case Criterion::EqualOpportunity:
      return "Equal Opportunity";
    case Criterion::TermByTerm:
      return "Term-by-Term";
  }
  return "unknown";
}

struct Factor {
  std::string name;
  std::vector<std::string> levels;  // first entry is the reference
  std::function<std::string(const synth::ExperimentRow&)> level_of;
};

std::vector<Factor> factors_for(int groups) {
  using synth::ClassBalance;
  using synth::GroupBalance;
  using synth::PredBias;
  std::vector<Factor> f;
  f.push_back({"Loss",
               {"Unweighted", "Weighted"},
               [](const synth::ExperimentRow& r) {
                 return r.objective == ObjectiveKind::Weighted ? std::string("Weighted")
                                                               : std::string("Unweighted");
               }});
  f.push_back({"Goal",
               {goal_label(Criterion::ClasswiseOdds), goal_label(Criterion::DemographicParity),
                goal_label(Criterion::EqualOpportunity), goal_label(Criterion::TermByTerm)},
               [](const synth::ExperimentRow& r) { return goal_label(r.criterion); }});

  std::vector<GroupBalance> gb = {GroupBalance::NoMinority, GroupBalance::OneSlight,
                                  GroupBalance::OneStrong};
  if (groups == 3) {
    gb.push_back(GroupBalance::TwoSlight);
    gb.push_back(GroupBalance::TwoStrong);
  }
  Factor group_factor{"Group Balance", {}, [groups](const synth::ExperimentRow& r) {
                        return synth::level_label(r.spec.group_balance, groups);
                      }};
  for (auto v : gb) group_factor.levels.push_back(synth::level_label(v, groups));
  f.push_back(group_factor);

  f.push_back({"Class Balance",
               {synth::level_label(ClassBalance::Balanced), synth::level_label(ClassBalance::OneRare),
                synth::level_label(ClassBalance::TwoRare)},
               [](const synth::ExperimentRow& r) { return synth::level_label(r.spec.class_balance); }});

  const std::vector<PredBias> pb =
      groups == 2 ? std::vector<PredBias>{PredBias::Low, PredBias::Medium, PredBias::High}
                  : std::vector<PredBias>{PredBias::LowOne, PredBias::LowTwo,
                                          PredBias::MediumOne, PredBias::MediumTwo,
                                          PredBias::HighOne, PredBias::HighTwo};
  Factor bias_factor{"Pred Bias", {}, [](const synth::ExperimentRow& r) {
                       return synth::level_label(r.spec.pred_bias);
                     }};
  for (auto v : pb) bias_factor.levels.push_back(synth::level_label(v));
  f.push_back(bias_factor);
  return f;
}

}  // namespace

RegressionResult ols_fit(const std::vector<synth::ExperimentRow>& rows, int groups,
                         Outcome outcome) {
  const auto factors = factors_for(groups);
  std::vector<std::pair<std::string, std::string>> names = {{"Intercept", "--"}};
  for (const auto& f : factors)
    for (std::size_t l = 1; l < f.levels.size(); ++l) names.emplace_back(f.name, f.levels[l]);

  std::vector<const synth::ExperimentRow*> used;
  for (const auto& r : rows)
    if (r.spec.groups == groups && r.ok()) used.push_back(&r);

  const auto n = static_cast<Eigen::Index>(used.size());
  const auto p = static_cast<Eigen::Index>(names.size());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = *used[i];
    x(i, 0) = 1.0;
    Eigen::Index col = 1;
    for (const auto& f : factors) {
      const std::string level = f.level_of(row);
      for (std::size_t l = 1; l < f.levels.size(); ++l, ++col)
        if (f.levels[l] == level) x(i, col) = 1.0;
    }
    y(i) = outcome == Outcome::AccuracyChange ? row.acc_change : row.tdr_change;
  }

  RegressionResult result = ols(x, y, names);
  for (const auto& f : factors) result.reference_levels.emplace_back(f.name, f.levels.front());
  return result;
}

std::string format_regression_table(const RegressionResult& acc, const RegressionResult& tdr,
                                    int groups) {
  auto cell = [](const RegressionTerm& t) {
    return fmt::format("{:.2f} ({:.2f}, {:.2f})", t.coefficient, t.ci_low, t.ci_high);
  };
  std::string out;
  out += fmt::format("Experiments with |A|={}  (n={}, R2 acc={:.3f}, R2 tdr={:.3f})\n", groups,
                     acc.observations, acc.r_squared, tdr.r_squared);
  out += fmt::format("{:<16}{:<24}{:<26}{}\n", "Hyperparameter", "Level", "Change in Acc (CI)",
                     "Change in TDR (CI)");
  std::string last_factor;
  for (std::size_t i = 0; i < acc.terms.size(); ++i) {
    const auto& a = acc.terms[i];
    std::string factor_col;
    if (a.factor != last_factor) {
      last_factor = a.factor;
      factor_col = a.factor;
      for (const auto& [factor, level] : acc.reference_levels) {
        if (factor != a.factor) continue;
        out += fmt::format("{:<16}{:<24}{:<26}{}\n", factor, level, "--", "--");
        factor_col.clear();
      }
    }
    out += fmt::format("{:<16}{:<24}{:<26}{}\n", factor_col, a.level, cell(a), cell(tdr.terms[i]));
  }
  return out;
}

}  // namespace mcfair
