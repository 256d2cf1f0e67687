#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mcfair/cli.hpp"
#include "mcfair/error.hpp"
#include "mcfair/io.hpp"
#include "mcfair/policy.hpp"

using namespace mcfair;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("mcfair_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "mcfair");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

nlohmann::json read_json(const std::string& path) {
  return nlohmann::json::parse(io::read_file(path));
}

std::size_t count_lines(const std::string& path) {
  const auto text = io::read_file(path);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("synth is reproducible") {
  Workspace ws;
  REQUIRE(run_cli({"synth", "--output", ws.path("a.csv"), "--pred-bias", "medium", "--seed", "4"}) == 0);
  REQUIRE(run_cli({"synth", "--output", ws.path("b.csv"), "--pred-bias", "medium", "--seed", "4"}) == 0);
  CHECK(io::read_file(ws.path("a.csv")) == io::read_file(ws.path("b.csv")));
  CHECK(count_lines(ws.path("a.csv")) == 1001);
  CHECK(run_cli({"synth", "--output", ws.path("c.csv"), "--groups", "2", "--group-balance", "two-slight"}) ==
        cli::kExitUsage);
}

TEST_CASE("adjust removes in-sample disparity and writes a report") {
  Workspace ws;
  REQUIRE(run_cli({"synth", "--output", ws.path("d.csv"), "--n", "3000", "--pred-bias", "high"}) == 0);
  REQUIRE(run_cli({"adjust", "--input", ws.path("d.csv"), "--output", ws.path("p.json"),
                   "--dump-lp", ws.path("lp.txt"), "--dump-model", ws.path("model.json")}) == 0);
  const auto report = read_json(ws.path("p.report.json"));
  CHECK(report.at("status") == "optimal");
  CHECK(report.at("num_terms") == 18);
  CHECK(report.at("in_sample").at("disparity").get<double>() <= 1e-6);
  CHECK(report.at("blackbox").at("disparity").get<double>() > 0.1);
  CHECK(report.at("change").at("disparity_pct").get<double>() == doctest::Approx(-100.0));
  CHECK(fs::exists(ws.path("lp.txt")));
  CHECK(read_json(ws.path("model.json")).contains("z"));

  const auto policy = load_policy(ws.path("p.json"));
  CHECK(policy.meta.training_n == 3000);
  CHECK(policy.meta.criterion == Criterion::TermByTerm);
  CHECK(policy.meta.objective == ObjectiveKind::Weighted);

  REQUIRE(run_cli({"adjust", "--input", ws.path("d.csv"), "--output", ws.path("p1.json"),
                   "--epsilon", "1", "--report", ws.path("r1.json")}) == 0);
  CHECK(read_json(ws.path("r1.json")).at("objective_value").get<double>() <=
        report.at("objective_value").get<double>());
}

TEST_CASE("adjust on an already fair perfect predictor") {
  Workspace ws;
  std::string csv = "y,y_hat,a\n";
  for (int r = 0; r < 60; ++r) {
    const auto c = std::to_string(r % 3);
    csv += c + "," + c + "," + (r % 2 ? "m" : "f") + "\n";
  }
  io::write_atomic(ws.path("fair.csv"), csv);
  REQUIRE(run_cli({"adjust", "--input", ws.path("fair.csv"), "--output", ws.path("p.json"),
                   "--objective", "unweighted", "--criterion", "classwise"}) == 0);
  const auto report = read_json(ws.path("p.report.json"));
  CHECK(report.at("in_sample").at("disparity").get<double>() == 0.0);
  CHECK(report.at("in_sample").at("accuracy").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("predict: identity, determinism, uniform frequencies") {
  Workspace ws;
  REQUIRE(run_cli({"synth", "--output", ws.path("d.csv"), "--n", "100000", "--seed", "2"}) == 0);
  const auto ds = load_dataset(ws.path("d.csv"));
  io::write_atomic(ws.path("id.json"), serialize_policy(identity_policy(ds.class_names, ds.group_names)));
  REQUIRE(run_cli({"predict", "--input", ws.path("d.csv"), "--policy", ws.path("id.json"),
                   "--output", ws.path("id.csv")}) == 0);
  std::string expect = "y_adj\n";
  for (int k : ds.y_hat) expect += ds.class_names[k] + "\n";
  CHECK(io::read_file(ws.path("id.csv")) == expect);

  io::write_atomic(ws.path("u.json"), serialize_policy(uniform_policy(ds.class_names, ds.group_names)));
  REQUIRE(run_cli({"predict", "--input", ws.path("d.csv"), "--policy", ws.path("u.json"),
                   "--output", ws.path("u1.csv"), "--seed", "8"}) == 0);
  REQUIRE(run_cli({"predict", "--input", ws.path("d.csv"), "--policy", ws.path("u.json"),
                   "--output", ws.path("u2.csv"), "--seed", "8"}) == 0);
  CHECK(io::read_file(ws.path("u1.csv")) == io::read_file(ws.path("u2.csv")));

  std::istringstream in(io::read_file(ws.path("u1.csv")));
  std::string line;
  std::getline(in, line);
  std::map<std::string, int> freq;
  int n = 0;
  while (std::getline(in, line)) {
    ++freq[line];
    ++n;
  }
  const double sd = std::sqrt((1.0 / 3) * (2.0 / 3) / n);
  for (const auto& [cls, count] : freq) CHECK(std::abs(count / double(n) - 1.0 / 3) < 3 * sd);
}

TEST_CASE("evaluate, crossval and sweep outputs") {
  Workspace ws;
  REQUIRE(run_cli({"synth", "--output", ws.path("d.csv"), "--n", "2000", "--pred-bias", "medium"}) == 0);
  REQUIRE(run_cli({"adjust", "--input", ws.path("d.csv"), "--output", ws.path("p.json")}) == 0);
  REQUIRE(run_cli({"evaluate", "--input", ws.path("d.csv"), "--policy", ws.path("p.json"),
                   "--output", ws.path("e.json")}) == 0);
  const auto ev = read_json(ws.path("e.json"));
  CHECK(ev.at("sampled").contains("accuracy"));
  CHECK(ev.at("analytic").at("disparity").get<double>() <= 1e-6);

  REQUIRE(run_cli({"crossval", "--input", ws.path("d.csv"), "--output", ws.path("cv.json"),
                   "--folds", "5"}) == 0);
  const auto cv = read_json(ws.path("cv.json"));
  CHECK(cv.at("fold_reports").size() == 5);
  CHECK(cv.contains("pooled"));
  CHECK(cv.contains("blackbox"));

  REQUIRE(run_cli({"sweep", "--input", ws.path("d.csv"), "--output", ws.path("s1.csv"),
                   "--criterion", "parity"}) == 0);
  CHECK(count_lines(ws.path("s1.csv")) == 102);
  REQUIRE(run_cli({"sweep", "--input", ws.path("d.csv"), "--output", ws.path("s4.csv")}) == 0);
  CHECK(count_lines(ws.path("s4.csv")) == 405);
}

TEST_CASE("experiment writes the table and both regressions") {
  Workspace ws;
  REQUIRE(run_cli({"experiment", "--output", ws.path("exp")}) == 0);
  CHECK(count_lines(ws.path("exp/experiment.csv")) == 937);
  CHECK(io::read_file(ws.path("exp/regression_groups2.txt")).find("Strong Minority") != std::string::npos);
  CHECK(io::read_file(ws.path("exp/regression_groups3.txt")).find("High Two") != std::string::npos);
}

TEST_CASE("exit codes") {
  Workspace ws;
  std::string err;
  CHECK(run_cli({}) == cli::kExitUsage);
  CHECK(run_cli({"adjust", "--input", ws.path("x.csv")}) == cli::kExitUsage);
  CHECK(run_cli({"adjust", "--input", ws.path("x.csv"), "--output", ws.path("p.json"),
                 "--criterion", "bogus"}) == cli::kExitUsage);
  CHECK(run_cli({"adjust", "--input", ws.path("x.csv"), "--output", ws.path("p.json"),
                 "--epsilon", "1.5"}) == cli::kExitUsage);
  CHECK(run_cli({"adjust", "--input", ws.path("missing.csv"), "--output", ws.path("p.json")}, &err) ==
        cli::kExitIo);
  CHECK(err.find("missing.csv") != std::string::npos);

  io::write_atomic(ws.path("one_group.csv"), "y,y_hat,a\n0,0,g\n1,1,g\n");
  CHECK(run_cli({"adjust", "--input", ws.path("one_group.csv"), "--output", ws.path("p.json")}) ==
        cli::kExitIngestion);

  io::write_atomic(ws.path("empty_cell.csv"), "y,y_hat,a\n0,0,g\n1,1,g\n0,0,h\n0,1,h\n");
  CHECK(run_cli({"adjust", "--input", ws.path("empty_cell.csv"), "--output", ws.path("p.json")}, &err) ==
        cli::kExitEstimation);
  CHECK(err.find("empty") != std::string::npos);
  CHECK(run_cli({"adjust", "--input", ws.path("empty_cell.csv"), "--output", ws.path("p.json"),
                 "--smoothing", "1"}) == cli::kExitOk);

  io::write_atomic(ws.path("new_group.csv"), "y,y_hat,a\n0,0,zz\n");
  CHECK(run_cli({"predict", "--input", ws.path("new_group.csv"), "--policy", ws.path("p.json"),
                 "--output", ws.path("y.csv")}) == cli::kExitIngestion);

  CHECK(cli::exit_code_for(Error(ErrorKind::Infeasible, "x")) == cli::kExitInfeasible);
  CHECK(cli::exit_code_for(Error(ErrorKind::IterationLimit, "x")) == cli::kExitIterationLimit);
  CHECK(cli::exit_code_for(std::runtime_error("x")) == cli::kExitFailure);
}

TEST_CASE("default report path") {
  CHECK(cli::default_report_path("out/policy.json") == fs::path("out/policy.report.json"));
  CHECK(cli::default_report_path("policy") == fs::path("policy.report.json"));
}
