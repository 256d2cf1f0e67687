// Acceptance checks 1-9. Prints one PASS/FAIL/N/A line per check plus
// details, and exits non-zero when a check fails unless it is listed in
// kKnownRed (documented in the README under "Known failing checks").

#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mcfair/cli.hpp"
#include "mcfair/empirical.hpp"
#include "mcfair/evaluation.hpp"
#include "mcfair/fairness_lp.hpp"
#include "mcfair/io.hpp"
#include "mcfair/policy.hpp"
#include "mcfair/regression.hpp"
#include "mcfair/simplex.hpp"
#include "mcfair/synth.hpp"
#include "oracles/monte_carlo.hpp"
#include "oracles/vertex_enum.hpp"

using namespace mcfair;
namespace fs = std::filesystem;

namespace {

const std::set<int> kKnownRed = {7, 8};

enum class Verdict { Pass, Fail, NotApplicable };

struct CheckResult {
  Verdict verdict = Verdict::Pass;
  std::vector<std::string> details;

  void note(const std::string& line) { details.push_back(line); }
  void require(bool ok, const std::string& line) {
    details.push_back((ok ? "ok    " : "FAIL  ") + line);
    if (!ok) verdict = Verdict::Fail;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path g_workdir;

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mcfair");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::cerr << "mcfair " << args[1] << " exited " << code << ": " << err.str();
  return code;
}

std::string work(const std::string& name) { return (g_workdir / name).string(); }

nlohmann::json read_json(const std::string& path) {
  return nlohmann::json::parse(io::read_file(path));
}

// ---------------------------------------------------------------------------

struct StandIn {
  std::string name;
  synth::GeneratorParams params;
  double reference_acc_change_pct;
};

std::vector<StandIn> stand_ins() {
  auto make = [](std::size_t n, std::vector<double> classes, std::vector<double> groups,
                 std::vector<double> tdr, std::uint64_t seed) {
    synth::GeneratorParams p;
    p.n = n;
    p.class_props = std::move(classes);
    p.group_props = std::move(groups);
    p.group_tdr = std::move(tdr);
    p.seed = seed;
    return p;
  };
  return {
      {"bar", make(22406, {0.80, 0.12, 0.08}, {0.85, 0.15}, {0.80, 0.68}, 101), -1.0},
      {"cannabis", make(1885, {0.45, 0.35, 0.20}, {0.55, 0.45}, {0.70, 0.60}, 102), -4.0},
      {"obesity", make(1490, {0.14, 0.14, 0.24, 0.24, 0.24}, {0.50, 0.50}, {0.75, 0.62}, 103),
       -7.0},
      {"parkinsons", make(5875, {0.34, 0.33, 0.33}, {0.68, 0.32}, {0.72, 0.64}, 104), -2.0},
  };
}

CheckResult check_in_sample() {
  CheckResult o;
  for (const auto& s : stand_ins()) {
    const auto csv = work("c1_" + s.name + ".csv");
    io::write_atomic(csv, dataset_to_csv(synth::generate(s.params)));
    const auto start = Clock::now();
    const int code = run_cli({"adjust", "--input", csv, "--output", work("c1_" + s.name + ".json"),
                              "--objective", "weighted", "--criterion", "term-by-term",
                              "--epsilon", "0"});
    const double secs = seconds_since(start);
    if (code != 0) {
      o.require(false, fmt::format("stand-in {} adjust failed (exit {})", s.name, code));
      continue;
    }
    const auto report = read_json(work("c1_" + s.name + ".report.json"));
    const double before = report["blackbox"]["disparity"].get<double>();
    const double after = report["in_sample"]["disparity"].get<double>();
    o.require(after <= 1e-6 && secs < 10.0,
              fmt::format("stand-in {:<10} N={:<5} C={} disparity {:.4f} -> {:.2e}, acc change "
                          "{:+.1f}%, {:.2f}s",
                          s.name, s.params.n, s.params.class_props.size(), before, after,
                          report["change"]["accuracy_pct"].get<double>(), secs));
  }

  const char* real_dir = std::getenv("MCFAIR_REAL_DATA_DIR");
  if (!real_dir) {
    o.note("real datasets: N/A (set MCFAIR_REAL_DATA_DIR with bar.csv, cannabis.csv, "
           "obesity.csv, parkinsons.csv)");
    return o;
  }
  for (const auto& s : stand_ins()) {
    const fs::path csv = fs::path(real_dir) / (s.name + ".csv");
    if (!fs::exists(csv)) {
      o.require(false, "real dataset missing: " + csv.string());
      continue;
    }
    const auto start = Clock::now();
    const int code = run_cli({"adjust", "--input", csv.string(), "--output",
                              work("c1_real_" + s.name + ".json")});
    const double secs = seconds_since(start);
    if (code != 0) {
      o.require(false, fmt::format("real {} adjust failed (exit {})", s.name, code));
      continue;
    }
    const auto report = read_json(work("c1_real_" + s.name + ".report.json"));
    const double after = report["in_sample"]["disparity"].get<double>();
    const double acc = report["change"]["accuracy_pct"].get<double>();
    o.require(after <= 1e-6 && secs < 10.0 && std::abs(acc - s.reference_acc_change_pct) <= 3.0,
              fmt::format("real {:<10} disparity {:.2e}, acc change {:+.1f}% (reference {:+.0f}% "
                          "+/- 3), {:.2f}s",
                          s.name, after, acc, s.reference_acc_change_pct, secs));
  }
  return o;
}

// ---------------------------------------------------------------------------

CheckResult check_oracle() {
  CheckResult o;
  rng::Engine eng(rng::derive(0, 2));
  const auto start = Clock::now();
  int matched = 0;
  double worst = 0.0;
  std::size_t vertices = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto em = fixtures::random_model(2, 2, eng);
    const Criterion crit = kAllCriteria[trial % 4];
    const double eps = trial % 2 == 0 ? 0.0 : 0.1 * rng::uniform01(eng);
    const ObjectiveKind kind = (trial / 4) % 2 ? ObjectiveKind::Unweighted : ObjectiveKind::Weighted;
    const auto lp = assemble(em, {kind, {}}, FairnessSpec::with_default_pairing(crit, eps));
    const auto sol = solve(lp.program);
    const auto best = oracle::enumerate_vertices(lp.program);
    if (sol.status != SolveStatus::Optimal || !best) continue;
    const double gap = std::abs(sol.objective - best->objective);
    worst = std::max(worst, gap);
    vertices += best->vertices;
    matched += gap <= 1e-8;
  }
  const double secs = seconds_since(start);
  o.require(matched == 200, fmt::format("{}/200 instances match vertex enumeration", matched));
  o.require(worst <= 1e-8, fmt::format("max |solver - oracle| = {:.2e}", worst));
  o.require(secs < 5.0, fmt::format("runtime {:.2f}s (limit 5s), {} feasible vertices visited",
                                    secs, vertices));
  return o;
}

// ---------------------------------------------------------------------------

CheckResult check_identities() {
  // Each Monte-Carlo comparison is a 3-sigma band. With hundreds of bands a
  // correct implementation still lands outside about 0.27% of them, so the
  // check bounds the exceedance rate and the largest deviation.
  CheckResult o;
  rng::Engine eng(rng::derive(0, 3));
  const int draws = 100000;
  int w_total = 0, w_out = 0, d_total = 0, d_out = 0;
  double w_max = 0.0, d_max = 0.0, fdr_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int C = 2 + trial % 3;
    const auto em = fixtures::random_model(C, 2, eng);
    const auto policy = fixtures::random_policy(C, 2, eng);
    const auto w = analytic_confusions(policy, em);
    for (int a = 0; a < 2; ++a) {
      const auto sim = oracle::simulate_w(policy.p[a], em.z[a], draws, eng);
      for (int i = 0; i < C; ++i)
        for (int j = 0; j < C; ++j) {
          const double z = oracle::z_score(sim(i, j), w[a](i, j), draws);
          w_max = std::max(w_max, z);
          w_out += z > 3.0;
          ++w_total;
        }

      // FDR_c = Pr(Y_adj=c | Y≠c) computed from W and the class weights.
      const Eigen::MatrixXd pv = policy.p[a] * em.v[a];
      for (int c = 0; c < C; ++c) {
        double num = 0.0, den = 0.0;
        for (int j = 0; j < C; ++j) {
          if (j == c) continue;
          num += w[a](c, j) * em.p_ya(a, j);
          den += em.p_ya(a, j);
        }
        fdr_err = std::max(fdr_err, std::abs(pv(c, c) - num / den));
      }

      const Eigen::VectorXd p_yhat = em.p_yhat_given_a.row(a).transpose();
      const Eigen::VectorXd parity = policy.p[a] * p_yhat;
      const auto marg = oracle::simulate_marginal(policy.p[a], p_yhat, draws, eng);
      for (int i = 0; i < C; ++i) {
        const double z = oracle::z_score(marg(i), parity(i), draws);
        d_max = std::max(d_max, z);
        d_out += z > 3.0;
        ++d_total;
      }
    }
  }
  auto band_ok = [](int out, int total, double max_z) {
    return out <= std::max(1, static_cast<int>(0.01 * total)) && max_z < 5.0;
  };
  o.require(band_ok(w_out, w_total, w_max),
            fmt::format("(a) W = P Z: {}/{} entries outside 3 sigma (nominal 0.27%), max z {:.2f}",
                        w_out, w_total, w_max));
  o.require(fdr_err <= 1e-10, fmt::format("(b) diag(P V) vs direct FDR: max error {:.2e}", fdr_err));
  o.require(band_ok(d_out, d_total, d_max),
            fmt::format("(c) parity P Pr(Yhat|A): {}/{} entries outside 3 sigma, max z {:.2f}",
                        d_out, d_total, d_max));
  return o;
}

// ---------------------------------------------------------------------------

CheckResult check_objective_identities() {
  CheckResult o;
  rng::Engine eng(rng::derive(0, 4));
  double unweighted_err = 0.0, weighted_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int C = 2 + trial % 4;
    const int G = 2 + trial % 2;
    const auto em = fixtures::random_model(C, G, eng);
    const auto policy = fixtures::random_policy(C, G, eng);
    const VarIndex idx(C, G);
    Eigen::VectorXd x(idx.size());
    for (int f = 0; f < idx.size(); ++f) {
      const auto e = idx.at(f);
      x(f) = policy.p[e.a](e.i, e.k);
    }
    const auto w = analytic_confusions(policy, em);
    double accuracy = 0.0, weighted = 0.0;
    for (int a = 0; a < G; ++a) {
      for (int j = 0; j < C; ++j) accuracy += em.p_ya(a, j) * w[a](j, j);
      weighted += C - w[a].trace();
    }
    unweighted_err = std::max(
        unweighted_err, std::abs(objective_vector(em, {ObjectiveKind::Unweighted, {}}).dot(x) -
                                 (1.0 - accuracy)));
    weighted_err = std::max(
        weighted_err,
        std::abs(objective_vector(em, {ObjectiveKind::Weighted, {}}).dot(x) - weighted));
  }
  o.require(unweighted_err <= 1e-8,
            fmt::format("unweighted objective vs 1 - accuracy: max error {:.2e}", unweighted_err));
  o.require(weighted_err <= 1e-8,
            fmt::format("weighted objective vs sum(C - trace W): max error {:.2e}", weighted_err));
  return o;
}

// ---------------------------------------------------------------------------

// Exact per-group class counts, so both groups share one empirical Pr(Y | A);
// Ŷ is drawn with a lower detection rate for group 1.
AdjustmentDataset stratified_biased(std::uint64_t seed) {
  AdjustmentDataset ds;
  ds.class_names = {"c0", "c1", "c2"};
  ds.group_names = {"g0", "g1"};
  const int group_n[] = {1200, 600};
  const double class_share[] = {0.5, 0.3, 0.2};
  const double tdr[] = {0.80, 0.55};
  rng::Engine eng(seed);
  for (int a = 0; a < 2; ++a)
    for (int y = 0; y < 3; ++y)
      for (int r = 0; r < static_cast<int>(group_n[a] * class_share[y]); ++r) {
        int y_hat = y;
        if (rng::uniform01(eng) >= tdr[a]) {
          y_hat = static_cast<int>(rng::uniform_index(eng, 2));
          if (y_hat >= y) ++y_hat;
        }
        ds.y.push_back(y);
        ds.y_hat.push_back(y_hat);
        ds.a.push_back(a);
      }
  return ds;
}

CheckResult check_sweep() {
  CheckResult o;
  const auto ds = stratified_biased(5);
  const auto csv = work("c5_data.csv");
  io::write_atomic(csv, dataset_to_csv(ds));
  if (run_cli({"sweep", "--input", csv, "--output", work("c5_sweep.csv")}) != 0) {
    o.require(false, "sweep command failed");
    return o;
  }
  const auto em = fit_empirical(ds);
  std::map<Criterion, double> at_zero;
  for (Criterion crit : kAllCriteria) {
    const auto rows = sweep(ds, em, {}, crit);
    double worst_rise = 0.0;
    bool all_optimal = rows.size() == 101;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      all_optimal = all_optimal && rows[i].status == SolveStatus::Optimal;
      if (i > 0) worst_rise = std::max(worst_rise, rows[i].objective_value - rows[i - 1].objective_value);
    }
    at_zero[crit] = rows.front().objective_value;
    o.require(all_optimal && worst_rise <= 1e-9,
              fmt::format("{:<13} 101 points, objective {:.4f} -> {:.4f}, largest rise {:.1e}",
                          to_string(crit), rows.front().objective_value,
                          rows.back().objective_value, std::max(worst_rise, 0.0)));
  }
  bool hardest = true;
  for (const auto& [crit, value] : at_zero)
    if (crit != Criterion::TermByTerm && value > at_zero[Criterion::TermByTerm] + 1e-9) hardest = false;
  o.require(hardest, fmt::format("term-by-term objective at eps=0 is the largest ({:.4f})",
                                 at_zero[Criterion::TermByTerm]));

  // Same comparison on an i.i.d. sample, where the groups' class mixes differ
  // by sampling noise. Reported, not asserted.
  synth::RegimeSpec spec;
  spec.pred_bias = synth::PredBias::Medium;
  const auto iid = synth::generate(spec);
  const auto em_iid = fit_empirical(iid);
  std::string line = "i.i.d. sample, eps=0 objectives:";
  for (Criterion crit : kAllCriteria)
    line += fmt::format(" {}={:.4f}", to_string(crit),
                        solve(assemble(em_iid, {}, {crit, 0.0, Pairing::Star}).program).objective);
  o.note(line);
  return o;
}

// ---------------------------------------------------------------------------

struct ExperimentData {
  std::vector<synth::ExperimentRow> rows;
  double seconds = 0.0;
  bool cli_ok = false;
  std::size_t csv_rows = 0;
};

const ExperimentData& experiment() {
  static ExperimentData data = [] {
    ExperimentData d;
    const auto start = Clock::now();
    d.cli_ok = run_cli({"experiment", "--output", work("c6_experiment"), "--seed", "0"}) == 0;
    d.seconds = seconds_since(start);
    if (d.cli_ok) {
      const auto text = io::read_file(work("c6_experiment/experiment.csv"));
      d.csv_rows = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
    }
    d.rows = synth::run_grid(0);
    return d;
  }();
  return data;
}

CheckResult check_experiment() {
  CheckResult o;
  const auto& d = experiment();
  o.require(d.cli_ok, "experiment command succeeded");
  std::set<std::uint64_t> datasets;
  std::size_t failed = 0;
  for (const auto& r : d.rows) {
    datasets.insert(r.spec.seed);
    failed += !r.ok();
  }
  o.require(datasets.size() == 117 && d.csv_rows == 936 && d.rows.size() == 936,
            fmt::format("{} datasets, {} adjustment rows in the CSV, {} solver failures",
                        datasets.size(), d.csv_rows, failed));

  const std::vector<std::pair<std::string, std::string>> refs = {
      {"Loss", "Unweighted"},       {"Goal", "Equalized Odds"}, {"Group Balance", "No Minority"},
      {"Class Balance", "Balanced"}, {"Pred Bias", "Low One"}};
  const auto acc3 = ols_fit(d.rows, 3, Outcome::AccuracyChange);
  const auto tdr3 = ols_fit(d.rows, 3, Outcome::TdrChange);
  auto refs2 = refs;
  refs2.back().second = "Low";
  const auto acc2 = ols_fit(d.rows, 2, Outcome::AccuracyChange);
  o.require(acc3.reference_levels == refs && acc2.reference_levels == refs2,
            "reference levels: Unweighted, Equalized Odds, No Minority, Balanced, Low One / Low");

  const double dp = acc3.term("Goal", "Demographic Parity").coefficient;
  const double high_one = acc3.term("Pred Bias", "High One").coefficient;
  const double high_two = acc3.term("Pred Bias", "High Two").coefficient;
  const double w_acc = acc3.term("Loss", "Weighted").coefficient;
  const double w_tdr = tdr3.term("Loss", "Weighted").coefficient;
  o.require(dp > 0, fmt::format("Demographic Parity accuracy coefficient {:+.3f} > 0", dp));
  o.require(high_one < 0 && high_two < 0,
            fmt::format("High bias accuracy coefficients {:+.3f} (One), {:+.3f} (Two) < 0",
                        high_one, high_two));
  o.require(w_acc < 0, fmt::format("Weighted loss accuracy coefficient {:+.3f} < 0", w_acc));
  o.require(w_tdr > 0, fmt::format("Weighted loss TDR coefficient {:+.3f} > 0", w_tdr));
  o.note(fmt::format("two-group fit: DP {:+.3f}, High {:+.3f}, Weighted acc {:+.3f}",
                     acc2.term("Goal", "Demographic Parity").coefficient,
                     acc2.term("Pred Bias", "High").coefficient,
                     acc2.term("Loss", "Weighted").coefficient));
  o.require(d.seconds < 300.0, fmt::format("experiment runtime {:.2f}s (limit 300s)", d.seconds));
  return o;
}

// ---------------------------------------------------------------------------

CheckResult check_triviality() {
  CheckResult o;
  const auto& d = experiment();
  auto rate = [&](ObjectiveKind kind, bool skip_high) {
    std::size_t n = 0, t = 0;
    for (const auto& r : d.rows) {
      if (r.objective != kind || !r.ok()) continue;
      const auto b = r.spec.pred_bias;
      if (skip_high && (b == synth::PredBias::High || b == synth::PredBias::HighOne ||
                        b == synth::PredBias::HighTwo))
        continue;
      ++n;
      t += r.trivial;
    }
    return std::pair<double, std::size_t>{n ? double(t) / n : 0.0, t};
  };
  const auto [u, ut] = rate(ObjectiveKind::Unweighted, false);
  const auto [w, wt] = rate(ObjectiveKind::Weighted, false);
  const bool ok = u > 0.0 && u >= 10.0 * w;
  o.require(ok, fmt::format("unweighted {:.1f}% ({} rows) vs weighted {:.1f}% ({} rows): ratio {}",
                            100 * u, ut, 100 * w, wt,
                            w > 0 ? fmt::format("{:.1f}x (need >= 10x)", u / w) : "inf"));
  const auto [u2, ut2] = rate(ObjectiveKind::Unweighted, true);
  const auto [w2, wt2] = rate(ObjectiveKind::Weighted, true);
  o.note(fmt::format("excluding chance-level (High) bias regimes: unweighted {:.1f}% vs "
                     "weighted {:.1f}%",
                     100 * u2, 100 * w2));
  return o;
}

// ---------------------------------------------------------------------------

CheckResult check_out_of_sample() {
  CheckResult o;
  const auto start = Clock::now();

  synth::RegimeSpec spec;
  spec.n = 100000;
  spec.pred_bias = synth::PredBias::Medium;
  spec.seed = 8;
  const auto big = work("c8_large.csv");
  io::write_atomic(big, dataset_to_csv(synth::generate(spec)));
  if (run_cli({"crossval", "--input", big, "--output", work("c8_large.json"), "--folds", "5"}) != 0) {
    o.require(false, "crossval on the large dataset failed");
    return o;
  }
  const auto cv = read_json(work("c8_large.json"));
  const double before = cv["blackbox"]["disparity"].get<double>();
  const double after = cv["pooled"]["disparity"].get<double>();
  const double tdr_change = cv["mean_tdr_change_pct"].get<double>();
  o.require(after < 0.02 && after < before,
            fmt::format("N=100000: pooled disparity {:.4f} -> {:.4f} ({:+.0f}%)", before, after,
                        cv["disparity_change_pct"].get<double>()));
  o.require(tdr_change > -10.0,
            fmt::format("N=100000: mean TDR {:.4f} -> {:.4f} ({:+.1f}%, need a drop under 10%)",
                        cv["blackbox"]["mean_tdr"].get<double>(),
                        cv["pooled"]["mean_tdr"].get<double>(), tdr_change));

  synth::GeneratorParams small;
  small.n = 500;
  small.class_props = {0.2, 0.2, 0.2, 0.2, 0.2};
  small.group_props = {0.5, 0.5};
  small.group_tdr = {0.80, 0.55};
  small.seed = 9;
  const auto tiny = work("c8_small.csv");
  io::write_atomic(tiny, dataset_to_csv(synth::generate(small)));
  const bool small_ok =
      run_cli({"crossval", "--input", tiny, "--output", work("c8_small.json"), "--folds", "5"}) == 0;
  if (small_ok) {
    const auto s = read_json(work("c8_small.json"));
    o.require(true, fmt::format("N=500, C=5 completes: disparity {:.4f} -> {:.4f}",
                                s["blackbox"]["disparity"].get<double>(),
                                s["pooled"]["disparity"].get<double>()));
  } else {
    o.require(false, "N=500, C=5 crossval failed");
  }
  const double secs = seconds_since(start);
  o.require(secs < 60.0, fmt::format("runtime {:.2f}s (limit 60s)", secs));
  return o;
}

// ---------------------------------------------------------------------------

CheckResult check_determinism() {
  CheckResult o;
  const auto data = work("c9_data.csv");
  run_cli({"synth", "--output", data, "--n", "3000", "--pred-bias", "medium", "--seed", "3"});

  struct Case {
    std::string name;
    std::function<std::vector<std::string>(const std::string&)> args;
    std::vector<std::string> outputs;
  };
  const std::vector<Case> cases = {
      {"synth",
       [](const std::string& p) {
         return std::vector<std::string>{"synth", "--output", p + "data.csv", "--groups", "3",
                                         "--pred-bias", "high-two", "--seed", "11"};
       },
       {"data.csv"}},
      {"adjust",
       [&](const std::string& p) {
         return std::vector<std::string>{"adjust", "--input", data, "--output", p + "policy.json",
                                         "--dump-lp", p + "lp.txt", "--dump-model", p + "model.json",
                                         "--criterion", "classwise", "--epsilon", "0.05"};
       },
       {"policy.json", "policy.report.json", "lp.txt", "model.json"}},
      {"predict",
       [&](const std::string& p) {
         return std::vector<std::string>{"predict", "--input", data, "--policy",
                                         work("c9_a_policy.json"), "--output", p + "pred.csv",
                                         "--seed", "4"};
       },
       {"pred.csv"}},
      {"evaluate",
       [&](const std::string& p) {
         return std::vector<std::string>{"evaluate", "--input", data, "--policy",
                                         work("c9_a_policy.json"), "--output", p + "eval.json",
                                         "--seed", "4"};
       },
       {"eval.json"}},
      {"crossval",
       [&](const std::string& p) {
         return std::vector<std::string>{"crossval", "--input", data, "--output", p + "cv.json",
                                         "--seed", "6", "--criterion", "opportunity"};
       },
       {"cv.json"}},
      {"sweep",
       [&](const std::string& p) {
         return std::vector<std::string>{"sweep", "--input", data, "--output", p + "sweep.csv"};
       },
       {"sweep.csv"}},
      {"experiment",
       [](const std::string& p) {
         return std::vector<std::string>{"experiment", "--output", p + "exp", "--seed", "0"};
       },
       {"exp/experiment.csv", "exp/regression_groups2.txt", "exp/regression_groups3.txt"}},
  };
  for (const auto& c : cases) {
    const auto a = work("c9_a_");
    const auto b = work("c9_b_");
    const bool ran = run_cli(c.args(a)) == 0 && run_cli(c.args(b)) == 0;
    bool same = ran;
    std::size_t bytes = 0;
    for (const auto& f : c.outputs) {
      if (!ran) break;
      const auto x = io::read_file(a + f);
      same = same && x == io::read_file(b + f);
      bytes += x.size();
    }
    o.require(same, fmt::format("{:<10} {} output file(s), {} bytes identical across runs", c.name,
                                c.outputs.size(), bytes));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  g_workdir = fs::temp_directory_path() / "mcfair_acceptance";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--workdir") g_workdir = argv[i + 1];
  fs::remove_all(g_workdir);
  fs::create_directories(g_workdir);

  const std::vector<std::pair<std::string, std::function<CheckResult()>>> checks = {
      {"in-sample fairness elimination", check_in_sample},
      {"LP oracle equivalence", check_oracle},
      {"confusion, FDR and parity identities", check_identities},
      {"objective identities", check_objective_identities},
      {"sweep monotonicity", check_sweep},
      {"factorial experiment shape", check_experiment},
      {"triviality ratio", check_triviality},
      {"out-of-sample behavior", check_out_of_sample},
      {"determinism", check_determinism},
  };

  int unexpected = 0;
  std::vector<std::string> summary;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto start = Clock::now();
    CheckResult o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("threw: ") + e.what());
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "N/A";
    const bool known = o.verdict == Verdict::Fail && kKnownRed.count(id);
    std::cout << fmt::format("{} [{}] {} ({:.2f}s){}\n", tag, id, checks[i].first,
                             seconds_since(start), known ? " [known]" : "");
    for (const auto& line : o.details) std::cout << "      " << line << "\n";
    std::cout.flush();
    summary.push_back(fmt::format("{} [{}] {}", tag, id, checks[i].first));
    if (o.verdict == Verdict::Fail && !known) ++unexpected;
  }
  std::cout << "\nsummary\n";
  for (const auto& s : summary) std::cout << "  " << s << "\n";
  return unexpected == 0 ? 0 : 1;
}
