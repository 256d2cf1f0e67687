#include "mcfair/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mcfair/empirical.hpp"
#include "mcfair/error.hpp"
#include "mcfair/evaluation.hpp"
#include "mcfair/io.hpp"
#include "mcfair/policy.hpp"
#include "mcfair/regression.hpp"
#include "mcfair/synth.hpp"

namespace mcfair::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void require_path(const std::filesystem::path& p, const char* flag) {
  require(!p.empty(), std::string(flag) + " is required");
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

Criterion criterion_or_default(const RunConfig& c) {
  return c.criterion.value_or(Criterion::TermByTerm);
}

nlohmann::json change_block(const EvaluationReport& before, const EvaluationReport& after) {
  return {
      {"accuracy_pct", percent_change(before.accuracy, after.accuracy)},
      {"mean_tdr_pct", percent_change(before.mean_tdr, after.mean_tdr)},
      {"disparity_pct", percent_change(before.disparity, after.disparity)},
  };
}

synth::RegimeSpec regime_from(const RunConfig& c) {
  synth::RegimeSpec spec;
  spec.n = c.n;
  spec.groups = c.groups;
  const auto cb = synth::parse_class_balance(c.class_balance);
  const auto gb = synth::parse_group_balance(c.group_balance);
  const auto pb = synth::parse_pred_bias(c.pred_bias);
  require(cb.has_value(), "unknown --class-balance '" + c.class_balance + "'");
  require(gb.has_value(), "unknown --group-balance '" + c.group_balance + "'");
  require(pb.has_value(), "unknown --pred-bias '" + c.pred_bias + "'");
  spec.class_balance = *cb;
  spec.group_balance = *gb;
  spec.pred_bias = *pb;
  spec.seed = c.seed;
  require(spec.valid(), "group balance and prediction bias levels do not fit --groups");
  return spec;
}

}  // namespace

void RunConfig::validate() const {
  require(epsilon >= 0.0 && epsilon <= 1.0, "--epsilon must lie in [0, 1]");
  require(smoothing >= 0.0, "--smoothing must be nonnegative");
  if (subcommand == "crossval") require(folds >= 2, "--folds must be at least 2");
  if (subcommand == "synth") {
    require(n > 0, "--n must be positive");
    require(groups == 2 || groups == 3, "--groups must be 2 or 3");
  }
}

std::filesystem::path default_report_path(const std::filesystem::path& policy_path) {
  auto p = policy_path;
  p.replace_extension(".report.json");
  return p;
}

void cmd_adjust(const RunConfig& config) {
  require_path(config.input, "--input");
  require_path(config.output, "--output");
  const auto ds = load_dataset(config.input, config.columns);
  const auto em = fit_empirical(ds, config.smoothing);
  const auto spec = FairnessSpec::with_default_pairing(criterion_or_default(config), config.epsilon);
  const auto lp = assemble(em, ObjectiveSpec{config.objective, {}}, spec);
  if (!config.dump_lp.empty()) io::write_atomic(config.dump_lp, dump_lp_text(lp));
  if (!config.dump_model.empty()) io::write_atomic(config.dump_model, dump_json(to_json(em)));

  const auto sol = solve(lp.program);
  auto policy = from_solution(lp, sol, ds.class_names, ds.group_names);
  policy.meta.training_n = ds.size();
  policy.meta.seed = config.seed;

  const auto blackbox = evaluate_analytic(identity_policy(ds.class_names, ds.group_names), em);
  auto blackbox_report = blackbox;
  blackbox_report.criterion = policy.meta.criterion;
  blackbox_report.sweep_measure = sweep_measure(
      identity_policy(ds.class_names, ds.group_names), em, policy.meta.criterion);
  const auto after = evaluate_analytic(policy, em);

  nlohmann::json report = {
      {"input_rows", ds.size()},
      {"criterion", std::string(to_string(spec.criterion))},
      {"epsilon", spec.epsilon},
      {"objective", std::string(to_string(config.objective))},
      {"status", std::string(to_string(sol.status))},
      {"objective_value", sol.objective},
      {"iterations", sol.iterations},
      {"num_terms", policy.num_terms()},
      {"blackbox", to_json(blackbox_report)},
      {"in_sample", to_json(after)},
      {"change", change_block(blackbox_report, after)},
  };

  io::write_atomic(config.output, serialize_policy(policy));
  const auto report_path = config.report.empty() ? default_report_path(config.output) : config.report;
  io::write_atomic(report_path, dump_json(report));
}

void cmd_predict(const RunConfig& config) {
  require_path(config.input, "--input");
  require_path(config.policy, "--policy");
  require_path(config.output, "--output");
  const auto policy = load_policy(config.policy);
  const auto ds = align_to_policy(load_dataset(config.input, config.columns), policy);
  const auto y_adj = predict_rows(policy, ds, config.seed);
  std::string out = "y_adj\n";
  for (int v : y_adj) {
    out += policy.class_names[v];
    out += '\n';
  }
  io::write_atomic(config.output, out);
}

void cmd_evaluate(const RunConfig& config) {
  require_path(config.input, "--input");
  require_path(config.policy, "--policy");
  require_path(config.output, "--output");
  const auto policy = load_policy(config.policy);
  const auto ds = align_to_policy(load_dataset(config.input, config.columns), policy);
  const auto sampled = evaluate_sampled(policy, ds, config.seed);

  nlohmann::json report = {{"rows", ds.size()}, {"seed", config.seed}, {"sampled", to_json(sampled)}};
  try {
    const auto em = fit_empirical(ds, config.smoothing);
    const auto blackbox = evaluate_analytic(identity_policy(policy.class_names, policy.group_names), em);
    const auto analytic = evaluate_analytic(policy, em);
    report["analytic"] = to_json(analytic);
    report["blackbox"] = to_json(blackbox);
    report["change"] = change_block(blackbox, analytic);
  } catch (const EstimationError& e) {
    report["analytic"] = nullptr;
    report["analytic_error"] = e.what();
  }
  io::write_atomic(config.output, dump_json(report));
}

void cmd_crossval(const RunConfig& config) {
  require_path(config.input, "--input");
  require_path(config.output, "--output");
  const auto ds = load_dataset(config.input, config.columns);
  const auto spec = FairnessSpec::with_default_pairing(criterion_or_default(config), config.epsilon);
  const auto result = crossval(ds, config.folds, config.seed, ObjectiveSpec{config.objective, {}},
                               spec, config.smoothing);
  auto j = to_json(result);
  j["criterion"] = std::string(to_string(spec.criterion));
  j["epsilon"] = spec.epsilon;
  j["objective"] = std::string(to_string(config.objective));
  io::write_atomic(config.output, dump_json(j));
}

void cmd_sweep(const RunConfig& config) {
  require_path(config.input, "--input");
  require_path(config.output, "--output");
  const auto ds = load_dataset(config.input, config.columns);
  const auto em = fit_empirical(ds, config.smoothing);
  std::vector<Criterion> criteria;
  if (config.criterion)
    criteria.push_back(*config.criterion);
  else
    criteria.assign(std::begin(kAllCriteria), std::end(kAllCriteria));

  std::vector<SweepRow> rows;
  for (Criterion c : criteria) {
    auto part = sweep(ds, em, ObjectiveSpec{config.objective, {}}, c);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  io::write_atomic(config.output, sweep_csv(rows));
}

void cmd_synth(const RunConfig& config) {
  require_path(config.output, "--output");
  const auto ds = synth::generate(regime_from(config));
  io::write_atomic(config.output, dataset_to_csv(ds, config.columns));
}

void cmd_experiment(const RunConfig& config, std::ostream& log) {
  require_path(config.output, "--output");
  std::error_code ec;
  std::filesystem::create_directories(config.output, ec);
  if (ec) throw IoError("cannot create " + config.output.string() + ": " + ec.message());

  const auto rows = synth::run_grid(config.seed);
  io::write_atomic(config.output / "experiment.csv", synth::experiment_csv(rows));

  for (int groups : {2, 3}) {
    const auto acc = ols_fit(rows, groups, Outcome::AccuracyChange);
    const auto tdr = ols_fit(rows, groups, Outcome::TdrChange);
    io::write_atomic(config.output / fmt::format("regression_groups{}.txt", groups),
                     format_regression_table(acc, tdr, groups));
  }

  for (ObjectiveKind kind : {ObjectiveKind::Unweighted, ObjectiveKind::Weighted}) {
    std::size_t total = 0, trivial = 0;
    for (const auto& r : rows) {
      if (r.objective != kind || !r.ok()) continue;
      ++total;
      trivial += r.trivial ? 1 : 0;
    }
    log << fmt::format("{} loss: {}/{} trivial adjustments ({:.1f}%)\n", to_string(kind), trivial,
                       total, total ? 100.0 * trivial / total : 0.0);
  }
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    switch (err->kind()) {
      case ErrorKind::Ingestion:
        return kExitIngestion;
      case ErrorKind::Estimation:
        return kExitEstimation;
      case ErrorKind::Infeasible:
        return kExitInfeasible;
      case ErrorKind::IterationLimit:
        return kExitIterationLimit;
      case ErrorKind::Io:
        return kExitIo;
    }
  }
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return kExitIo;
  return kExitFailure;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Post-process multiclass predictions into a fair randomized predictor", "mcfair"};
  app.require_subcommand(1);
  RunConfig config;

  std::string criterion_name;
  std::string objective_name = "weighted";
  auto add_columns = [&](CLI::App* sub) {
    sub->add_option("--y-col", config.columns.y, "Name of the true-label column");
    sub->add_option("--yhat-col", config.columns.y_hat, "Name of the prediction column");
    sub->add_option("--a-col", config.columns.a, "Name of the protected-group column");
  };
  auto add_solve = [&](CLI::App* sub) {
    sub->add_option("--criterion", criterion_name, "term-by-term|classwise|opportunity|parity")
        ->check(CLI::IsMember({"term-by-term", "classwise", "opportunity", "parity"}));
    sub->add_option("--objective", objective_name, "unweighted|weighted")
        ->check(CLI::IsMember({"unweighted", "weighted"}));
    sub->add_option("--epsilon", config.epsilon, "Fairness relaxation in [0, 1]");
    sub->add_option("--smoothing", config.smoothing, "Additive smoothing for estimated rates");
  };

  auto* adjust = app.add_subcommand("adjust", "Fit a fair adjustment policy");
  adjust->add_option("--input", config.input, "Prediction triples CSV")->required();
  adjust->add_option("--output", config.output, "Policy JSON to write")->required();
  adjust->add_option("--report", config.report, "Report JSON (default: <output>.report.json)");
  adjust->add_option("--dump-lp", config.dump_lp, "Write the assembled program as text");
  adjust->add_option("--dump-model", config.dump_model, "Write the estimated rates as JSON");
  adjust->add_option("--seed", config.seed, "Seed recorded in the policy");
  add_solve(adjust);
  add_columns(adjust);

  auto* predict_cmd = app.add_subcommand("predict", "Sample adjusted labels");
  predict_cmd->add_option("--input", config.input, "Prediction triples CSV")->required();
  predict_cmd->add_option("--policy", config.policy, "Policy JSON")->required();
  predict_cmd->add_option("--output", config.output, "Predictions CSV to write")->required();
  predict_cmd->add_option("--seed", config.seed, "Sampling seed");
  add_columns(predict_cmd);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a policy on labelled data");
  evaluate_cmd->add_option("--input", config.input, "Prediction triples CSV")->required();
  evaluate_cmd->add_option("--policy", config.policy, "Policy JSON")->required();
  evaluate_cmd->add_option("--output", config.output, "Report JSON to write")->required();
  evaluate_cmd->add_option("--seed", config.seed, "Sampling seed");
  evaluate_cmd->add_option("--smoothing", config.smoothing, "Smoothing for the analytic report");
  add_columns(evaluate_cmd);

  auto* crossval_cmd = app.add_subcommand("crossval", "Stratified k-fold out-of-sample evaluation");
  crossval_cmd->add_option("--input", config.input, "Prediction triples CSV")->required();
  crossval_cmd->add_option("--output", config.output, "Report JSON to write")->required();
  crossval_cmd->add_option("--folds", config.folds, "Number of folds");
  crossval_cmd->add_option("--seed", config.seed, "Split and sampling seed");
  add_solve(crossval_cmd);
  add_columns(crossval_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Solve over epsilon = 0.00 .. 1.00");
  sweep_cmd->add_option("--input", config.input, "Prediction triples CSV")->required();
  sweep_cmd->add_option("--output", config.output, "Sweep CSV to write")->required();
  sweep_cmd->add_option("--seed", config.seed, "Unused; accepted for uniformity");
  add_solve(sweep_cmd);
  add_columns(sweep_cmd);

  auto* synth_cmd = app.add_subcommand("synth", "Generate one synthetic dataset");
  synth_cmd->add_option("--output", config.output, "CSV to write")->required();
  synth_cmd->add_option("--n", config.n, "Rows");
  synth_cmd->add_option("--groups", config.groups, "2 or 3");
  synth_cmd->add_option("--class-balance", config.class_balance, "balanced|one-rare|two-rare");
  synth_cmd->add_option("--group-balance", config.group_balance,
                        "no-minority|one-slight|one-strong|two-slight|two-strong");
  synth_cmd->add_option("--pred-bias", config.pred_bias,
                        "low|medium|high (G=2) or low-one..high-two (G=3)");
  synth_cmd->add_option("--seed", config.seed, "Generator seed");
  add_columns(synth_cmd);

  auto* experiment_cmd = app.add_subcommand("experiment", "Run the full synthetic factorial grid");
  experiment_cmd->add_option("--output", config.output, "Directory for results")->required();
  experiment_cmd->add_option("--seed", config.seed, "Base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    config.subcommand = app.get_subcommands().front()->get_name();
    if (!criterion_name.empty()) config.criterion = parse_criterion(criterion_name);
    config.objective = parse_objective(objective_name).value_or(ObjectiveKind::Weighted);
    config.validate();
    const auto& s = config.subcommand;
    if (s == "adjust") cmd_adjust(config);
    else if (s == "predict") cmd_predict(config);
    else if (s == "evaluate") cmd_evaluate(config);
    else if (s == "crossval") cmd_crossval(config);
    else if (s == "sweep") cmd_sweep(config);
    else if (s == "synth") cmd_synth(config);
    else if (s == "experiment") cmd_experiment(config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitOk;
}

}  // namespace mcfair::cli
