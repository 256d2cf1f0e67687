#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcfair/empirical.hpp"
#include "mcfair/simplex.hpp"

namespace mcfair {

enum class Criterion { TermByTerm, ClasswiseOdds, EqualOpportunity, DemographicParity };
enum class Pairing { AllPairs, Star };
enum class ObjectiveKind { Unweighted, Weighted, Custom };

std::string_view to_string(Criterion c) noexcept;
std::string_view to_string(Pairing p) noexcept;
std::string_view to_string(ObjectiveKind k) noexcept;
/// Accepts the CLI spellings (term-by-term, classwise, opportunity, parity).
std::optional<Criterion> parse_criterion(std::string_view s);
std::optional<ObjectiveKind> parse_objective(std::string_view s);

inline constexpr Criterion kAllCriteria[] = {Criterion::TermByTerm, Criterion::ClasswiseOdds,
                                             Criterion::EqualOpportunity,
                                             Criterion::DemographicParity};

struct FairnessSpec {
  Criterion criterion = Criterion::TermByTerm;
  /// Largest allowed absolute difference of any constrained scalar between
  /// paired groups. Zero means exact equality.
  double epsilon = 0.0;
  Pairing pairing = Pairing::Star;

  /// Star against group 0 for exact equality, all pairs when relaxed.
  static FairnessSpec with_default_pairing(Criterion criterion, double epsilon);
  void validate() const;
};

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::Weighted;
  /// loss[a](i, j) = l(i, j, a), the cost of predicting i when the truth is
  /// j. Required iff kind == Custom. Diagonals are ignored.
  MatrixStack custom_loss;
};

/// Flat index of P^a(i, k) = Pr(Y_adj=i | Ŷ=k, A=a), laid out as a, then i,
/// then k.
class VarIndex {
 public:
  VarIndex() = default;
  VarIndex(int num_classes, int num_groups) : c_(num_classes), g_(num_groups) {}

  int size() const noexcept { return g_ * c_ * c_; }
  int operator()(int a, int i, int k) const noexcept { return (a * c_ + i) * c_ + k; }

  struct Entry {
    int a, i, k;
    bool operator==(const Entry&) const = default;
  };
  Entry at(int flat) const noexcept {
    return {flat / (c_ * c_), (flat / c_) % c_, flat % c_};
  }

  int num_classes() const noexcept { return c_; }
  int num_groups() const noexcept { return g_; }

 private:
  int c_ = 0;
  int g_ = 0;
};

/// One constrained scalar: coeffs · x is (quantity for `group`) minus
/// (quantity for `other`).
struct FairnessRow {
  Eigen::VectorXd coeffs;
  int group = 0;
  int other = 0;
  std::string label;
};

struct AssembledLP {
  LinearProgram program;
  VarIndex var_index;
  FairnessSpec fairness;
  ObjectiveKind objective = ObjectiveKind::Weighted;
  int num_stochastic_rows = 0;
  int num_fairness_rows = 0;
};

/// Coefficient of P^a(i, k) is Σ_{j≠i} z[a](k, j) · Pr(A=a, Y=j) · l(i, j, a).
Eigen::VectorXd objective_vector(const EmpiricalModel& em, const ObjectiveSpec& obj);

/// Group pairs constrained under `pairing`, as (a, a') with a < a'.
std::vector<std::pair<int, int>> group_pairs(int num_groups, Pairing pairing);

/// Scalar difference functionals for every constrained pair:
///   TermByTerm         C² entries of W^a = P^a z[a]
///   ClasswiseOdds      C diagonals of W^a, then C rates diag(P^a v[a])
///   EqualOpportunity   C diagonals of W^a
///   DemographicParity  C entries of P^a Pr(Ŷ|A=a)
std::vector<FairnessRow> fairness_rows(const EmpiricalModel& em, const FairnessSpec& spec);

AssembledLP assemble(const EmpiricalModel& em, const ObjectiveSpec& obj,
                     const FairnessSpec& spec);

/// Plain-text dump for external solvers: a `vars` line, a `c` line, then one
/// `eq` / `ub` line per row with coefficients followed by the right-hand side,
/// then `lower` and `upper` lines. Space separated.
std::string dump_lp_text(const AssembledLP& lp);

}  // namespace mcfair
