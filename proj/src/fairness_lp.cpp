#include "mcfair/fairness_lp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mcfair/error.hpp"
#include "mcfair/io.hpp"

namespace mcfair {

std::string_view to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::TermByTerm:
      return "term-by-term";
    case Criterion::ClasswiseOdds:
      return "classwise";
    case Criterion::EqualOpportunity:
      return "opportunity";
    case Criterion::DemographicParity:
      return "parity";
  }
  return "unknown";
}

std::string_view to_string(Pairing p) noexcept {
  return p == Pairing::Star ? "star" : "all-pairs";
}

std::string_view to_string(ObjectiveKind k) noexcept {
  switch (k) {
    case ObjectiveKind::Unweighted:
      return "unweighted";
    case ObjectiveKind::Weighted:
      return "weighted";
    case ObjectiveKind::Custom:
      return "custom";
  }
  return "unknown";
}

std::optional<Criterion> parse_criterion(std::string_view s) {
  for (Criterion c : kAllCriteria)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::optional<ObjectiveKind> parse_objective(std::string_view s) {
  if (s == "unweighted") return ObjectiveKind::Unweighted;
  if (s == "weighted") return ObjectiveKind::Weighted;
  return std::nullopt;
}

FairnessSpec FairnessSpec::with_default_pairing(Criterion criterion, double epsilon) {
  return {criterion, epsilon, epsilon > 0.0 ? Pairing::AllPairs : Pairing::Star};
}

void FairnessSpec::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must lie in [0, 1]");
}

Eigen::VectorXd objective_vector(const EmpiricalModel& em, const ObjectiveSpec& obj) {
  const int C = em.num_classes;
  const int G = em.num_groups;
  const VarIndex idx(C, G);

  if (obj.kind == ObjectiveKind::Custom) {
    if (static_cast<int>(obj.custom_loss.size()) != G)
      throw std::invalid_argument("custom loss must hold one matrix per group");
    for (const auto& l : obj.custom_loss) {
      if (l.rows() != C || l.cols() != C)
        throw std::invalid_argument("custom loss matrices must be C×C");
      if (!l.allFinite() || (l.array() < 0.0).any())
        throw std::invalid_argument("custom loss entries must be finite and nonnegative");
    }
  }
  if (obj.kind == ObjectiveKind::Weighted) {
    for (int a = 0; a < G; ++a)
      for (int j = 0; j < C; ++j)
        if (!(em.p_ya(a, j) > 0.0))
          throw EstimationError("weighted loss needs Pr(Y=" + std::to_string(j) +
                                ", A=" + std::to_string(a) + ") > 0");
  }

  auto loss = [&](int a, int i, int j) -> double {
    switch (obj.kind) {
      case ObjectiveKind::Unweighted:
        return 1.0;
      case ObjectiveKind::Weighted:
        return 1.0 / em.p_ya(a, j);
      case ObjectiveKind::Custom:
        return obj.custom_loss[a](i, j);
    }
    return 0.0;
  };

  Eigen::VectorXd c = Eigen::VectorXd::Zero(idx.size());
  for (int a = 0; a < G; ++a) {
    for (int i = 0; i < C; ++i) {
      for (int k = 0; k < C; ++k) {
        double coeff = 0.0;
        for (int j = 0; j < C; ++j) {
          if (j == i) continue;
          if (obj.kind == ObjectiveKind::Weighted) {
            // Pr(A=a, Y=j) / Pr(A=a, Y=j) cancels exactly.
            coeff += em.z[a](k, j);
          } else {
            coeff += em.z[a](k, j) * em.p_ya(a, j) * loss(a, i, j);
          }
        }
        c(idx(a, i, k)) = coeff;
      }
    }
  }
  return c;
}

std::vector<std::pair<int, int>> group_pairs(int num_groups, Pairing pairing) {
  std::vector<std::pair<int, int>> pairs;
  if (pairing == Pairing::Star) {
    for (int a = 1; a < num_groups; ++a) pairs.emplace_back(0, a);
  } else {
    for (int a = 0; a < num_groups; ++a)
      for (int b = a + 1; b < num_groups; ++b) pairs.emplace_back(a, b);
  }
  return pairs;
}

namespace {

// Per-group linear functionals over that group's block of variables. Row r of
// the returned matrix holds the coefficients on P^a(i, k) at column i*C + k.
Eigen::MatrixXd group_functionals(const EmpiricalModel& em, Criterion criterion, int a) {
  const int C = em.num_classes;
  auto col = [C](int i, int k) { return i * C + k; };

  switch (criterion) {
    case Criterion::TermByTerm: {
      // W^a(i, j) = Σ_k P^a(i, k) z[a](k, j)
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(C * C, C * C);
      for (int i = 0; i < C; ++i)
        for (int j = 0; j < C; ++j)
          for (int k = 0; k < C; ++k) f(i * C + j, col(i, k)) = em.z[a](k, j);
      return f;
    }
    case Criterion::EqualOpportunity:
    case Criterion::ClasswiseOdds: {
      const int rows = criterion == Criterion::ClasswiseOdds ? 2 * C : C;
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(rows, C * C);
      for (int c = 0; c < C; ++c)
        for (int k = 0; k < C; ++k) f(c, col(c, k)) = em.z[a](k, c);
      if (criterion == Criterion::ClasswiseOdds) {
        // FDR^a_c = Σ_j P^a(c, j) v[a](j, c)
        for (int c = 0; c < C; ++c)
          for (int j = 0; j < C; ++j) f(C + c, col(c, j)) = em.v[a](j, c);
      }
      return f;
    }
    case Criterion::DemographicParity: {
      // D^a(i) = Σ_k P^a(i, k) Pr(Ŷ=k | A=a)
      Eigen::MatrixXd f = Eigen::MatrixXd::Zero(C, C * C);
      for (int i = 0; i < C; ++i)
        for (int k = 0; k < C; ++k) f(i, col(i, k)) = em.p_yhat_given_a(a, k);
      return f;
    }
  }
  return {};
}

std::string row_label(Criterion criterion, int r, int C) {
  switch (criterion) {
    case Criterion::TermByTerm:
      return "W(" + std::to_string(r / C) + "," + std::to_string(r % C) + ")";
    case Criterion::EqualOpportunity:
      return "TDR(" + std::to_string(r) + ")";
    case Criterion::ClasswiseOdds:
      return r < C ? "TDR(" + std::to_string(r) + ")" : "FDR(" + std::to_string(r - C) + ")";
    case Criterion::DemographicParity:
      return "D(" + std::to_string(r) + ")";
  }
  return {};
}

}  // namespace

std::vector<FairnessRow> fairness_rows(const EmpiricalModel& em, const FairnessSpec& spec) {
  const int C = em.num_classes;
  const int G = em.num_groups;
  const VarIndex idx(C, G);
  const int block = C * C;

  std::vector<Eigen::MatrixXd> functionals;
  functionals.reserve(G);
  for (int a = 0; a < G; ++a) functionals.push_back(group_functionals(em, spec.criterion, a));

  std::vector<FairnessRow> rows;
  for (const auto& [a, b] : group_pairs(G, spec.pairing)) {
    for (Eigen::Index r = 0; r < functionals[a].rows(); ++r) {
      FairnessRow row;
      row.coeffs = Eigen::VectorXd::Zero(idx.size());
      row.coeffs.segment(idx(a, 0, 0), block) = functionals[a].row(r).transpose();
      row.coeffs.segment(idx(b, 0, 0), block) -= functionals[b].row(r).transpose();
      row.group = a;
      row.other = b;
      row.label = row_label(spec.criterion, static_cast<int>(r), C) + " a" +
                  std::to_string(a) + "-a" + std::to_string(b);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

AssembledLP assemble(const EmpiricalModel& em, const ObjectiveSpec& obj,
                     const FairnessSpec& spec) {
  spec.validate();
  const int C = em.num_classes;
  const int G = em.num_groups;
  const VarIndex idx(C, G);
  const int n = idx.size();

  AssembledLP out;
  out.var_index = idx;
  out.fairness = spec;
  out.objective = obj.kind;

  LinearProgram& lp = out.program;
  lp.c = objective_vector(em, obj);
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::Ones(n);

  const auto fair = fairness_rows(em, spec);
  const int stochastic = G * C;
  const int fair_count = static_cast<int>(fair.size());
  out.num_stochastic_rows = stochastic;
  out.num_fairness_rows = fair_count;

  const bool exact = spec.epsilon == 0.0;
  const int eq_rows = stochastic + (exact ? fair_count : 0);
  const int ub_rows = exact ? 0 : 2 * fair_count;

  lp.a_eq = Eigen::MatrixXd::Zero(eq_rows, n);
  lp.b_eq = Eigen::VectorXd::Zero(eq_rows);
  lp.a_ub = Eigen::MatrixXd::Zero(ub_rows, n);
  lp.b_ub = Eigen::VectorXd::Zero(ub_rows);

  // Σ_i P^a(i, k) = 1 for every (a, k).
  for (int a = 0; a < G; ++a) {
    for (int k = 0; k < C; ++k) {
      const int r = a * C + k;
      for (int i = 0; i < C; ++i) lp.a_eq(r, idx(a, i, k)) = 1.0;
      lp.b_eq(r) = 1.0;
    }
  }

  for (int f = 0; f < fair_count; ++f) {
    if (exact) {
      lp.a_eq.row(stochastic + f) = fair[f].coeffs.transpose();
    } else {
      lp.a_ub.row(2 * f) = fair[f].coeffs.transpose();
      lp.b_ub(2 * f) = spec.epsilon;
      lp.a_ub.row(2 * f + 1) = -fair[f].coeffs.transpose();
      lp.b_ub(2 * f + 1) = spec.epsilon;
    }
  }
  return out;
}

std::string dump_lp_text(const AssembledLP& lp) {
  const LinearProgram& p = lp.program;
  std::ostringstream out;
  auto write_vec = [&](const char* tag, const Eigen::VectorXd& v, const double* rhs) {
    out << tag;
    for (Eigen::Index j = 0; j < v.size(); ++j) out << ' ' << io::format_double(v(j));
    if (rhs) out << ' ' << io::format_double(*rhs);
    out << '\n';
  };
  out << "vars " << p.num_vars() << '\n';
  write_vec("c", p.c, nullptr);
  for (Eigen::Index r = 0; r < p.a_eq.rows(); ++r) {
    const Eigen::VectorXd row = p.a_eq.row(r).transpose();
    write_vec("eq", row, &p.b_eq(r));
  }
  for (Eigen::Index r = 0; r < p.a_ub.rows(); ++r) {
    const Eigen::VectorXd row = p.a_ub.row(r).transpose();
    write_vec("ub", row, &p.b_ub(r));
  }
  write_vec("lower", p.lower, nullptr);
  write_vec("upper", p.upper, nullptr);
  return out.str();
}

}  // namespace mcfair
