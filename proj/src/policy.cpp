#include "mcfair/policy.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "mcfair/error.hpp"
#include "mcfair/io.hpp"

namespace mcfair {

namespace {

std::vector<std::string> default_names(int count) {
  std::vector<std::string> names;
  for (int i = 0; i < count; ++i) names.push_back(std::to_string(i));
  return names;
}

}  // namespace

void AdjustmentPolicy::validate() const {
  const int C = num_classes();
  if (static_cast<int>(p.size()) != num_groups())
    throw std::invalid_argument("policy has one matrix per group");
  for (const auto& m : p) {
    if (m.rows() != C || m.cols() != C) throw std::invalid_argument("policy matrices must be C×C");
    if ((m.array() < 0.0).any() || (m.array() > 1.0).any())
      throw std::invalid_argument("policy entries must lie in [0, 1]");
    for (int k = 0; k < C; ++k)
      if (std::abs(m.col(k).sum() - 1.0) > 1e-8)
        throw std::invalid_argument("policy columns must sum to 1");
  }
}

AdjustmentPolicy from_solution(const AssembledLP& lp, const LPSolution& sol,
                               std::vector<std::string> class_names,
                               std::vector<std::string> group_names) {
  switch (sol.status) {
    case SolveStatus::Optimal:
      break;
    case SolveStatus::Infeasible:
      throw Error(ErrorKind::Infeasible, "fairness linear program is infeasible");
    case SolveStatus::IterationLimit:
      throw Error(ErrorKind::IterationLimit, "simplex iteration limit reached");
    case SolveStatus::Unbounded:
      throw std::logic_error("box-bounded linear program reported unbounded");
  }
  const int C = lp.var_index.num_classes();
  const int G = lp.var_index.num_groups();
  if (sol.x.size() != lp.var_index.size())
    throw std::invalid_argument("solution length does not match the program");

  AdjustmentPolicy policy;
  policy.class_names = class_names.empty() ? default_names(C) : std::move(class_names);
  policy.group_names = group_names.empty() ? default_names(G) : std::move(group_names);
  policy.p.assign(G, Eigen::MatrixXd::Zero(C, C));
  for (int a = 0; a < G; ++a) {
    for (int k = 0; k < C; ++k) {
      for (int i = 0; i < C; ++i)
        policy.p[a](i, k) = std::clamp(sol.x(lp.var_index(a, i, k)), 0.0, 1.0);
      const double sum = policy.p[a].col(k).sum();
      policy.p[a].col(k) /= sum;
    }
  }
  policy.meta.criterion = lp.fairness.criterion;
  policy.meta.epsilon = lp.fairness.epsilon;
  policy.meta.pairing = lp.fairness.pairing;
  policy.meta.objective = lp.objective;
  policy.meta.status = sol.status;
  policy.meta.objective_value = sol.objective;
  policy.meta.iterations = sol.iterations;
  return policy;
}

AdjustmentPolicy fit_policy(const EmpiricalModel& em, const ObjectiveSpec& obj,
                            const FairnessSpec& spec, std::vector<std::string> class_names,
                            std::vector<std::string> group_names,
                            const SolverOptions& options) {
  const AssembledLP lp = assemble(em, obj, spec);
  const LPSolution sol = solve(lp.program, options);
  return from_solution(lp, sol, std::move(class_names), std::move(group_names));
}

AdjustmentPolicy identity_policy(std::vector<std::string> class_names,
                                 std::vector<std::string> group_names) {
  AdjustmentPolicy policy;
  const auto C = static_cast<Eigen::Index>(class_names.size());
  policy.p.assign(group_names.size(), Eigen::MatrixXd::Identity(C, C));
  policy.class_names = std::move(class_names);
  policy.group_names = std::move(group_names);
  return policy;
}

AdjustmentPolicy uniform_policy(std::vector<std::string> class_names,
                                std::vector<std::string> group_names) {
  AdjustmentPolicy policy;
  const auto C = static_cast<Eigen::Index>(class_names.size());
  policy.p.assign(group_names.size(), Eigen::MatrixXd::Constant(C, C, 1.0 / C));
  policy.class_names = std::move(class_names);
  policy.group_names = std::move(group_names);
  return policy;
}

int predict(const AdjustmentPolicy& policy, int y_hat, int a, rng::Engine& eng) {
  if (a < 0 || a >= policy.num_groups()) throw std::out_of_range("group index out of range");
  if (y_hat < 0 || y_hat >= policy.num_classes())
    throw std::out_of_range("class index out of range");
  const auto& column = policy.p[a];
  return static_cast<int>(rng::sample_index(
      eng, [&](std::size_t i) { return column(static_cast<Eigen::Index>(i), y_hat); },
      static_cast<std::size_t>(policy.num_classes())));
}

std::vector<int> predict_rows(const AdjustmentPolicy& policy, const AdjustmentDataset& ds,
                              std::uint64_t seed, std::span<const std::size_t> row_ids) {
  if (!row_ids.empty() && row_ids.size() != ds.size())
    throw std::invalid_argument("row id count does not match dataset size");
  std::vector<int> out(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    auto eng = rng::row_engine(seed, row_ids.empty() ? r : row_ids[r]);
    out[r] = predict(policy, ds.y_hat[r], ds.a[r], eng);
  }
  return out;
}

int predict_argmax(const AdjustmentPolicy& policy, int y_hat, int a) {
  Eigen::Index best = 0;
  policy.p.at(a).col(y_hat).maxCoeff(&best);
  return static_cast<int>(best);
}

MatrixStack analytic_confusions(const AdjustmentPolicy& policy, const EmpiricalModel& em) {
  if (static_cast<int>(policy.p.size()) != em.num_groups ||
      policy.num_classes() != em.num_classes)
    throw std::invalid_argument("policy and empirical model shapes differ");
  MatrixStack w(policy.p.size());
  for (std::size_t a = 0; a < w.size(); ++a) w[a] = policy.p[a] * em.z[a];
  return w;
}

AdjustmentDataset align_to_policy(const AdjustmentDataset& ds, const AdjustmentPolicy& policy) {
  if (ds.class_names == policy.class_names && ds.group_names == policy.group_names) return ds;

  auto build_map = [](const std::vector<std::string>& from, const std::vector<std::string>& to,
                      const char* what) {
    std::map<std::string, int> lookup;
    for (std::size_t i = 0; i < to.size(); ++i) lookup.emplace(to[i], static_cast<int>(i));
    std::vector<int> map;
    for (const auto& name : from) {
      auto it = lookup.find(name);
      if (it == lookup.end())
        throw IngestionError(std::string(what) + " '" + name + "' unseen in training");
      map.push_back(it->second);
    }
    return map;
  };
  const auto class_map = build_map(ds.class_names, policy.class_names, "class");
  const auto group_map = build_map(ds.group_names, policy.group_names, "group");

  AdjustmentDataset out;
  out.class_names = policy.class_names;
  out.group_names = policy.group_names;
  out.y.reserve(ds.size());
  out.y_hat.reserve(ds.size());
  out.a.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.y.push_back(class_map[ds.y[i]]);
    out.y_hat.push_back(class_map[ds.y_hat[i]]);
    out.a.push_back(group_map[ds.a[i]]);
  }
  return out;
}

nlohmann::json to_json(const AdjustmentPolicy& policy) {
  nlohmann::json j;
  j["version"] = kPolicyFormatVersion;
  j["class_names"] = policy.class_names;
  j["group_names"] = policy.group_names;
  j["orientation"] = "matrices[a][i][k] = Pr(Y_adj = i | Y_hat = k, A = a)";
  nlohmann::json mats = nlohmann::json::array();
  for (const auto& m : policy.p) mats.push_back(matrix_to_json(m));
  j["matrices"] = std::move(mats);
  const auto& m = policy.meta;
  j["meta"] = {
      {"criterion", std::string(to_string(m.criterion))},
      {"epsilon", m.epsilon},
      {"pairing", std::string(to_string(m.pairing))},
      {"objective", std::string(to_string(m.objective))},
      {"status", std::string(to_string(m.status))},
      {"objective_value", m.objective_value},
      {"iterations", m.iterations},
      {"training_n", m.training_n},
      {"seed", m.seed},
  };
  return j;
}

AdjustmentPolicy policy_from_json(const nlohmann::json& j) {
  if (!j.contains("version")) throw IngestionError("policy file lacks a version field");
  if (j.at("version").get<int>() != kPolicyFormatVersion)
    throw IngestionError("unsupported policy version " + j.at("version").dump());
  AdjustmentPolicy policy;
  policy.class_names = j.at("class_names").get<std::vector<std::string>>();
  policy.group_names = j.at("group_names").get<std::vector<std::string>>();
  for (const auto& m : j.at("matrices")) policy.p.push_back(matrix_from_json(m));

  const auto& meta = j.at("meta");
  auto criterion = parse_criterion(meta.at("criterion").get<std::string>());
  if (!criterion) throw IngestionError("unknown criterion in policy file");
  policy.meta.criterion = *criterion;
  policy.meta.epsilon = meta.at("epsilon").get<double>();
  policy.meta.pairing =
      meta.at("pairing").get<std::string>() == "star" ? Pairing::Star : Pairing::AllPairs;
  const auto objective = meta.at("objective").get<std::string>();
  policy.meta.objective = objective == "custom"
                              ? ObjectiveKind::Custom
                              : parse_objective(objective).value_or(ObjectiveKind::Weighted);
  const auto status = meta.at("status").get<std::string>();
  for (auto s : {SolveStatus::Optimal, SolveStatus::Infeasible, SolveStatus::Unbounded,
                 SolveStatus::IterationLimit})
    if (to_string(s) == status) policy.meta.status = s;
  policy.meta.objective_value = meta.at("objective_value").get<double>();
  policy.meta.iterations = meta.at("iterations").get<int>();
  policy.meta.training_n = meta.at("training_n").get<std::size_t>();
  policy.meta.seed = meta.at("seed").get<std::uint64_t>();
  try {
    policy.validate();
  } catch (const std::invalid_argument& e) {
    throw IngestionError(std::string("invalid policy file: ") + e.what());
  }
  return policy;
}

std::string serialize_policy(const AdjustmentPolicy& policy) {
  return to_json(policy).dump(2) + "\n";
}

AdjustmentPolicy load_policy(const std::filesystem::path& path) {
  try {
    return policy_from_json(nlohmann::json::parse(io::read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw IngestionError("cannot parse policy file: " + std::string(e.what()));
  }
}

}  // namespace mcfair
