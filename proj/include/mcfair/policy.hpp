#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcfair/dataset.hpp"
#include "mcfair/empirical.hpp"
#include "mcfair/fairness_lp.hpp"
#include "mcfair/rng.hpp"
#include "mcfair/simplex.hpp"

namespace mcfair {

inline constexpr int kPolicyFormatVersion = 1;

struct PolicyMeta {
  Criterion criterion = Criterion::TermByTerm;
  double epsilon = 0.0;
  Pairing pairing = Pairing::Star;
  ObjectiveKind objective = ObjectiveKind::Weighted;
  SolveStatus status = SolveStatus::Optimal;
  double objective_value = 0.0;
  int iterations = 0;
  std::size_t training_n = 0;
  std::uint64_t seed = 0;
};

/// Randomized derived predictor: p[a](i, k) = Pr(Y_adj=i | Ŷ=k, A=a).
/// Every column of every p[a] is a probability distribution.
struct AdjustmentPolicy {
  std::vector<std::string> class_names;
  std::vector<std::string> group_names;
  MatrixStack p;
  PolicyMeta meta;

  int num_classes() const noexcept { return static_cast<int>(class_names.size()); }
  int num_groups() const noexcept { return static_cast<int>(group_names.size()); }
  std::size_t num_terms() const noexcept {
    return p.size() * static_cast<std::size_t>(num_classes() * num_classes());
  }
  void validate() const;
};

/// Un-flattens an Optimal solution. Entries are clipped into [0, 1] and each
/// column is divided by its sum. Throws Error(Infeasible / IterationLimit)
/// for other statuses.
AdjustmentPolicy from_solution(const AssembledLP& lp, const LPSolution& sol,
                               std::vector<std::string> class_names = {},
                               std::vector<std::string> group_names = {});

/// Assembles and solves the program for `em`, then wraps the solution.
/// Throws Error(Infeasible / IterationLimit) when the solve is not optimal.
AdjustmentPolicy fit_policy(const EmpiricalModel& em, const ObjectiveSpec& obj,
                            const FairnessSpec& spec, std::vector<std::string> class_names,
                            std::vector<std::string> group_names,
                            const SolverOptions& options = {});

/// Pass-through policy (the blackbox itself).
AdjustmentPolicy identity_policy(std::vector<std::string> class_names,
                                 std::vector<std::string> group_names);
AdjustmentPolicy uniform_policy(std::vector<std::string> class_names,
                                std::vector<std::string> group_names);

/// Draws Y_adj for one individual by inverse CDF over column y_hat of p[a],
/// classes in index order. Consumes one draw from `eng`.
int predict(const AdjustmentPolicy& policy, int y_hat, int a, rng::Engine& eng);

/// Adjusted label for every row, row r using rng::row_engine(seed, row_ids[r])
/// (or r when `row_ids` is empty).
std::vector<int> predict_rows(const AdjustmentPolicy& policy, const AdjustmentDataset& ds,
                              std::uint64_t seed, std::span<const std::size_t> row_ids = {});

/// The argmax rule: most probable adjusted class for each column, lowest
/// index on ties. Does not preserve fairness; kept for comparison.
int predict_argmax(const AdjustmentPolicy& policy, int y_hat, int a);

/// w[a] = p[a] · z[a].
MatrixStack analytic_confusions(const AdjustmentPolicy& policy, const EmpiricalModel& em);

/// Re-encodes `ds` against the policy's dictionaries by name. Throws
/// IngestionError when `ds` contains a class or group the policy lacks.
AdjustmentDataset align_to_policy(const AdjustmentDataset& ds, const AdjustmentPolicy& policy);

nlohmann::json to_json(const AdjustmentPolicy& policy);
AdjustmentPolicy policy_from_json(const nlohmann::json& j);
std::string serialize_policy(const AdjustmentPolicy& policy);
AdjustmentPolicy load_policy(const std::filesystem::path& path);

}  // namespace mcfair
