#include "mcfair/synth.hpp"

#include <sstream>
#include <stdexcept>

#include "mcfair/empirical.hpp"
#include "mcfair/error.hpp"
#include "mcfair/evaluation.hpp"
#include "mcfair/io.hpp"
#include "mcfair/policy.hpp"
#include "mcfair/rng.hpp"

namespace mcfair::synth {

namespace {

constexpr ClassBalance kClassLevels[] = {ClassBalance::Balanced, ClassBalance::OneRare,
                                         ClassBalance::TwoRare};
constexpr GroupBalance kGroupLevels2[] = {GroupBalance::NoMinority, GroupBalance::OneSlight,
                                          GroupBalance::OneStrong};
constexpr GroupBalance kGroupLevels3[] = {GroupBalance::NoMinority, GroupBalance::OneSlight,
                                          GroupBalance::OneStrong, GroupBalance::TwoSlight,
                                          GroupBalance::TwoStrong};
constexpr PredBias kBiasLevels2[] = {PredBias::Low, PredBias::Medium, PredBias::High};
constexpr PredBias kBiasLevels3[] = {PredBias::LowOne,    PredBias::LowTwo,
                                     PredBias::MediumOne, PredBias::MediumTwo,
                                     PredBias::HighOne,   PredBias::HighTwo};

template <class Enum, std::size_t N>
std::optional<Enum> parse_level(std::string_view s, const Enum (&levels)[N]) {
  for (Enum e : levels)
    if (to_string(e) == s) return e;
  return std::nullopt;
}

double bias_delta(PredBias b) {
  switch (b) {
    case PredBias::Low:
    case PredBias::LowOne:
    case PredBias::LowTwo:
      return kLowBias;
    case PredBias::Medium:
    case PredBias::MediumOne:
    case PredBias::MediumTwo:
      return kMediumBias;
    case PredBias::High:
    case PredBias::HighOne:
    case PredBias::HighTwo:
      return kHighBias;
  }
  return 0.0;
}

bool biases_two(PredBias b) {
  return b == PredBias::LowTwo || b == PredBias::MediumTwo || b == PredBias::HighTwo;
}

std::size_t draw_index(rng::Engine& eng, const std::vector<double>& props) {
  return rng::sample_index(eng, [&](std::size_t i) { return props[i]; }, props.size());
}

}  // namespace

std::string_view to_string(ClassBalance v) noexcept {
  switch (v) {
    case ClassBalance::Balanced:
      return "balanced";
    case ClassBalance::OneRare:
      return "one-rare";
    case ClassBalance::TwoRare:
      return "two-rare";
  }
  return "unknown";
}

std::string_view to_string(GroupBalance v) noexcept {
  switch (v) {
    case GroupBalance::NoMinority:
      return "no-minority";
    case GroupBalance::OneSlight:
      return "one-slight";
    case GroupBalance::OneStrong:
      return "one-strong";
    case GroupBalance::TwoSlight:
      return "two-slight";
    case GroupBalance::TwoStrong:
      return "two-strong";
  }
  return "unknown";
}

std::string_view to_string(PredBias v) noexcept {
  switch (v) {
    case PredBias::Low:
      return "low";
    case PredBias::Medium:
      return "medium";
    case PredBias::High:
      return "high";
    case PredBias::LowOne:
      return "low-one";
    case PredBias::LowTwo:
      return "low-two";
    case PredBias::MediumOne:
      return "medium-one";
    case PredBias::MediumTwo:
      return "medium-two";
    case PredBias::HighOne:
      return "high-one";
    case PredBias::HighTwo:
      return "high-two";
  }
  return "unknown";
}

std::string level_label(GroupBalance v, int groups) {
  switch (v) {
    case GroupBalance::NoMinority:
      return "No Minority";
    case GroupBalance::OneSlight:
      return groups == 2 ? "Slight Minority" : "One Slight Minority";
    case GroupBalance::OneStrong:
      return groups == 2 ? "Strong Minority" : "One Strong Minority";
    case GroupBalance::TwoSlight:
      return "Two Slight Minorities";
    case GroupBalance::TwoStrong:
      return "Two Strong Minorities";
  }
  return "unknown";
}

std::string level_label(ClassBalance v) {
  switch (v) {
    case ClassBalance::Balanced:
      return "Balanced";
    case ClassBalance::OneRare:
      return "One Rare";
    case ClassBalance::TwoRare:
      return "Two Rare";
  }
  return "unknown";
}

std::string level_label(PredBias v) {
  switch (v) {
    case PredBias::Low:
      return "Low";
    case PredBias::Medium:
      return "Medium";
    case PredBias::High:
      return "High";
    case PredBias::LowOne:
      return "Low One";
    case PredBias::LowTwo:
      return "Low Two";
    case PredBias::MediumOne:
      return "Medium One";
    case PredBias::MediumTwo:
      return "Medium Two";
    case PredBias::HighOne:
      return "High One";
    case PredBias::HighTwo:
      return "High Two";
  }
  return "unknown";
}

std::optional<ClassBalance> parse_class_balance(std::string_view s) {
  return parse_level(s, kClassLevels);
}
std::optional<GroupBalance> parse_group_balance(std::string_view s) {
  return parse_level(s, kGroupLevels3);
}
std::optional<PredBias> parse_pred_bias(std::string_view s) {
  constexpr PredBias all[] = {PredBias::Low,       PredBias::Medium,    PredBias::High,
                              PredBias::LowOne,    PredBias::LowTwo,    PredBias::MediumOne,
                              PredBias::MediumTwo, PredBias::HighOne,   PredBias::HighTwo};
  return parse_level(s, all);
}

bool RegimeSpec::valid() const noexcept {
  if (n == 0) return false;
  auto contains = [](const auto& levels, auto v) {
    for (auto l : levels)
      if (l == v) return true;
    return false;
  };
  if (groups == 2)
    return contains(kGroupLevels2, group_balance) && contains(kBiasLevels2, pred_bias);
  if (groups == 3)
    return contains(kGroupLevels3, group_balance) && contains(kBiasLevels3, pred_bias);
  return false;
}

GeneratorParams params_for(const RegimeSpec& spec) {
  if (!spec.valid()) throw std::invalid_argument("invalid regime specification");
  GeneratorParams p;
  p.n = spec.n;
  p.seed = spec.seed;

  switch (spec.class_balance) {
    case ClassBalance::Balanced:
      p.class_props = {1.0 / 3, 1.0 / 3, 1.0 / 3};
      break;
    case ClassBalance::OneRare:
      p.class_props = {0.45, 0.45, 0.10};
      break;
    case ClassBalance::TwoRare:
      p.class_props = {0.80, 0.10, 0.10};
      break;
  }

  if (spec.groups == 2) {
    switch (spec.group_balance) {
      case GroupBalance::OneSlight:
        p.group_props = {0.65, 0.35};
        break;
      case GroupBalance::OneStrong:
        p.group_props = {0.85, 0.15};
        break;
      default:
        p.group_props = {0.5, 0.5};
        break;
    }
    p.group_tdr = {kBaseTdr, kBaseTdr - bias_delta(spec.pred_bias)};
  } else {
    switch (spec.group_balance) {
      case GroupBalance::NoMinority:
        p.group_props = {1.0 / 3, 1.0 / 3, 1.0 / 3};
        break;
      case GroupBalance::OneSlight:
        p.group_props = {0.40, 0.40, 0.20};
        break;
      case GroupBalance::OneStrong:
        p.group_props = {0.45, 0.45, 0.10};
        break;
      case GroupBalance::TwoSlight:
        p.group_props = {0.50, 0.25, 0.25};
        break;
      case GroupBalance::TwoStrong:
        p.group_props = {0.70, 0.15, 0.15};
        break;
    }
    const double biased = kBaseTdr - bias_delta(spec.pred_bias);
    p.group_tdr = {kBaseTdr, biases_two(spec.pred_bias) ? biased : kBaseTdr, biased};
  }
  return p;
}

AdjustmentDataset generate(const GeneratorParams& params) {
  const std::size_t C = params.class_props.size();
  const std::size_t G = params.group_props.size();
  if (C < 2 || G < 2 || params.group_tdr.size() != G || params.n == 0)
    throw std::invalid_argument("malformed generator parameters");

  AdjustmentDataset ds;
  for (std::size_t c = 0; c < C; ++c) ds.class_names.push_back("c" + std::to_string(c));
  for (std::size_t g = 0; g < G; ++g) ds.group_names.push_back("g" + std::to_string(g));
  ds.y.reserve(params.n);
  ds.y_hat.reserve(params.n);
  ds.a.reserve(params.n);

  auto eng = rng::make_engine(params.seed);
  for (std::size_t r = 0; r < params.n; ++r) {
    const auto a = draw_index(eng, params.group_props);
    const auto y = draw_index(eng, params.class_props);
    std::size_t y_hat = y;
    if (rng::uniform01(eng) >= params.group_tdr[a]) {
      y_hat = rng::uniform_index(eng, C - 1);
      if (y_hat >= y) ++y_hat;
    }
    ds.a.push_back(static_cast<int>(a));
    ds.y.push_back(static_cast<int>(y));
    ds.y_hat.push_back(static_cast<int>(y_hat));
  }
  ds.validate();
  return ds;
}

AdjustmentDataset generate(const RegimeSpec& spec) { return generate(params_for(spec)); }

std::vector<RegimeSpec> enumerate_grid(std::size_t n) {
  std::vector<RegimeSpec> grid;
  for (ClassBalance cb : kClassLevels)
    for (GroupBalance gb : kGroupLevels2)
      for (PredBias pb : kBiasLevels2) grid.push_back({n, 2, cb, gb, pb, 0});
  for (ClassBalance cb : kClassLevels)
    for (GroupBalance gb : kGroupLevels3)
      for (PredBias pb : kBiasLevels3) grid.push_back({n, 3, cb, gb, pb, 0});
  return grid;
}

std::uint64_t regime_seed(std::uint64_t base_seed, const RegimeSpec& spec) {
  std::uint64_t h = rng::mix(base_seed);
  for (std::uint64_t field :
       {static_cast<std::uint64_t>(spec.groups), static_cast<std::uint64_t>(spec.class_balance),
        static_cast<std::uint64_t>(spec.group_balance),
        static_cast<std::uint64_t>(spec.pred_bias), static_cast<std::uint64_t>(spec.n)}) {
    h = rng::derive(h, field);
  }
  return h;
}

std::vector<ExperimentRow> run_grid(std::uint64_t base_seed,
                                    const std::vector<ObjectiveKind>& objectives,
                                    const std::vector<Criterion>& criteria,
                                    const std::vector<RegimeSpec>& regimes,
                                    const SolverOptions& options) {
  std::vector<ExperimentRow> rows;
  rows.reserve(regimes.size() * objectives.size() * criteria.size());
  for (RegimeSpec spec : regimes) {
    spec.seed = regime_seed(base_seed, spec);

    std::string error;
    AdjustmentDataset ds;
    EmpiricalModel em;
    EvaluationReport before;
    try {
      ds = generate(spec);
      em = fit_empirical(ds);
      before = evaluate_analytic(identity_policy(ds.class_names, ds.group_names), em);
    } catch (const Error& e) {
      error = e.what();
    }

    for (ObjectiveKind obj : objectives) {
      for (Criterion crit : criteria) {
        ExperimentRow row;
        row.spec = spec;
        row.objective = obj;
        row.criterion = crit;
        row.error = error;
        if (!error.empty()) {
          rows.push_back(row);
          continue;
        }
        row.acc_before = before.accuracy;
        row.tdr_before = before.mean_tdr;
        const AssembledLP lp = assemble(em, {obj, {}}, FairnessSpec::with_default_pairing(crit, 0.0));
        const LPSolution sol = solve(lp.program, options);
        row.status = sol.status;
        if (sol.status == SolveStatus::Optimal) {
          const AdjustmentPolicy policy = from_solution(lp, sol, ds.class_names, ds.group_names);
          const EvaluationReport after = evaluate_analytic(policy, em);
          row.trivial = after.trivial;
          row.acc_after = after.accuracy;
          row.tdr_after = after.mean_tdr;
          row.acc_change = (after.accuracy - before.accuracy) / before.accuracy;
          row.tdr_change = (after.mean_tdr - before.mean_tdr) / before.mean_tdr;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<ExperimentRow> run_grid(std::uint64_t base_seed) {
  return run_grid(base_seed, {ObjectiveKind::Unweighted, ObjectiveKind::Weighted},
                  {Criterion::ClasswiseOdds, Criterion::DemographicParity,
                   Criterion::EqualOpportunity, Criterion::TermByTerm},
                  enumerate_grid());
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out << "groups,class_balance,group_balance,pred_bias,n,seed,objective,criterion,status,"
         "trivial,acc_change,tdr_change,acc_before,acc_after,tdr_before,tdr_after\n";
  for (const auto& r : rows) {
    out << r.spec.groups << ',' << to_string(r.spec.class_balance) << ','
        << to_string(r.spec.group_balance) << ',' << to_string(r.spec.pred_bias) << ','
        << r.spec.n << ',' << r.spec.seed << ',' << mcfair::to_string(r.objective) << ','
        << mcfair::to_string(r.criterion) << ','
        << (r.error.empty() ? mcfair::to_string(r.status) : std::string_view("error")) << ','
        << (r.trivial ? 1 : 0) << ',' << io::format_double(r.acc_change) << ','
        << io::format_double(r.tdr_change) << ',' << io::format_double(r.acc_before) << ','
        << io::format_double(r.acc_after) << ',' << io::format_double(r.tdr_before) << ','
        << io::format_double(r.tdr_after) << '\n';
  }
  return out.str();
}

}  // namespace mcfair::synth
