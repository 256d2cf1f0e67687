#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcfair/dataset.hpp"
#include "mcfair/fairness_lp.hpp"
#include "mcfair/simplex.hpp"

namespace mcfair::synth {

enum class ClassBalance { Balanced, OneRare, TwoRare };
enum class GroupBalance { NoMinority, OneSlight, OneStrong, TwoSlight, TwoStrong };
/// Low/Medium/High apply to two-group regimes; the One/Two variants to
/// three-group regimes, biasing one or both non-majority groups.
enum class PredBias { Low, Medium, High, LowOne, LowTwo, MediumOne, MediumTwo, HighOne, HighTwo };

std::string_view to_string(ClassBalance v) noexcept;
std::string_view to_string(GroupBalance v) noexcept;
std::string_view to_string(PredBias v) noexcept;
/// Display labels used in regression tables ("One Slight Minority", ...).
std::string level_label(GroupBalance v, int groups);
std::string level_label(ClassBalance v);
std::string level_label(PredBias v);

std::optional<ClassBalance> parse_class_balance(std::string_view s);
std::optional<GroupBalance> parse_group_balance(std::string_view s);
std::optional<PredBias> parse_pred_bias(std::string_view s);

/// Majority-group mean true detection rate.
inline constexpr double kBaseTdr = 0.80;
inline constexpr double kLowBias = 0.10;
inline constexpr double kMediumBias = 0.25;
/// Puts the disadvantaged group at chance for three classes.
inline constexpr double kHighBias = 0.80 - 1.0 / 3.0;
inline constexpr int kClasses = 3;

struct RegimeSpec {
  std::size_t n = 1000;
  int groups = 2;
  ClassBalance class_balance = ClassBalance::Balanced;
  GroupBalance group_balance = GroupBalance::NoMinority;
  PredBias pred_bias = PredBias::Low;
  std::uint64_t seed = 0;

  bool valid() const noexcept;
};

/// Explicit generator parameters: rows are drawn i.i.d. with
///   A ~ group_props, Y ~ class_props (independent of A),
///   Ŷ = Y with probability group_tdr[A], otherwise uniform over the other
///   classes.
struct GeneratorParams {
  std::size_t n = 0;
  std::vector<double> class_props;
  std::vector<double> group_props;
  std::vector<double> group_tdr;
  std::uint64_t seed = 0;
};

GeneratorParams params_for(const RegimeSpec& spec);
AdjustmentDataset generate(const GeneratorParams& params);
AdjustmentDataset generate(const RegimeSpec& spec);

/// All valid regimes: 27 with two groups, then 90 with three. Seeds are left
/// at zero; run_grid derives them.
std::vector<RegimeSpec> enumerate_grid(std::size_t n = 1000);

/// Per-regime seed: a hash of base_seed and the regime's level fields.
std::uint64_t regime_seed(std::uint64_t base_seed, const RegimeSpec& spec);

struct ExperimentRow {
  RegimeSpec spec;
  ObjectiveKind objective = ObjectiveKind::Unweighted;
  Criterion criterion = Criterion::ClasswiseOdds;
  SolveStatus status = SolveStatus::Optimal;
  /// Non-empty when generation or estimation failed for this regime.
  std::string error;
  bool trivial = false;
  double acc_before = 0.0;
  double acc_after = 0.0;
  double tdr_before = 0.0;
  double tdr_after = 0.0;
  /// Relative changes as fractions: (after - before) / before.
  double acc_change = 0.0;
  double tdr_change = 0.0;

  bool ok() const noexcept { return error.empty() && status == SolveStatus::Optimal; }
};

/// For every regime and every (objective, criterion) pair: generate, fit,
/// solve at exact equality, evaluate analytically against the blackbox.
std::vector<ExperimentRow> run_grid(std::uint64_t base_seed,
                                    const std::vector<ObjectiveKind>& objectives,
                                    const std::vector<Criterion>& criteria,
                                    const std::vector<RegimeSpec>& regimes,
                                    const SolverOptions& options = {});
std::vector<ExperimentRow> run_grid(std::uint64_t base_seed);

std::string experiment_csv(const std::vector<ExperimentRow>& rows);

}  // namespace mcfair::synth
