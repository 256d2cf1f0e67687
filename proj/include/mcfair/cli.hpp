#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "mcfair/dataset.hpp"
#include "mcfair/fairness_lp.hpp"

namespace mcfair::cli {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitIngestion = 3,
  kExitEstimation = 4,
  kExitInfeasible = 5,
  kExitIterationLimit = 6,
  kExitIo = 7,
};

struct RunConfig {
  std::string subcommand;
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path policy;
  std::filesystem::path report;
  std::filesystem::path dump_lp;
  std::filesystem::path dump_model;
  std::optional<Criterion> criterion;
  ObjectiveKind objective = ObjectiveKind::Weighted;
  double epsilon = 0.0;
  double smoothing = 0.0;
  int folds = 5;
  std::uint64_t seed = 0;
  ColumnSchema columns;

  // synth
  std::size_t n = 1000;
  int groups = 2;
  std::string class_balance = "balanced";
  std::string group_balance = "no-minority";
  std::string pred_bias = "low";

  void validate() const;
};

/// Each command is a pure function of its input files and config; outputs
/// are written atomically. Errors propagate as exceptions.
void cmd_adjust(const RunConfig& config);
void cmd_predict(const RunConfig& config);
void cmd_evaluate(const RunConfig& config);
void cmd_crossval(const RunConfig& config);
void cmd_sweep(const RunConfig& config);
void cmd_synth(const RunConfig& config);
void cmd_experiment(const RunConfig& config, std::ostream& log);

/// Report path used by `adjust` when --report is absent: the policy path
/// with its extension replaced by ".report.json".
std::filesystem::path default_report_path(const std::filesystem::path& policy_path);

int exit_code_for(const std::exception& e) noexcept;

/// Parses arguments, dispatches, maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcfair::cli
