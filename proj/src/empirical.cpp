#include "mcfair/empirical.hpp"

#include <string>

#include "mcfair/error.hpp"

namespace mcfair {

EmpiricalModel fit_empirical(const AdjustmentDataset& ds, double smoothing) {
  ds.validate();
  if (!(smoothing >= 0.0)) throw std::invalid_argument("smoothing must be nonnegative");

  const int C = ds.num_classes();
  const int G = ds.num_groups();
  const double N = static_cast<double>(ds.size());

  // counts[a](k, j) = #{Ŷ=k, Y=j, A=a}
  std::vector<Eigen::MatrixXd> counts(G, Eigen::MatrixXd::Zero(C, C));
  Eigen::MatrixXi n_cells = Eigen::MatrixXi::Zero(G, C);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    counts[ds.a[i]](ds.y_hat[i], ds.y[i]) += 1.0;
    n_cells(ds.a[i], ds.y[i]) += 1;
  }

  std::string empty_groups;
  std::string empty_cells;
  for (int a = 0; a < G; ++a) {
    if (n_cells.row(a).sum() == 0) empty_groups += " " + ds.group_names[a];
    for (int j = 0; j < C; ++j) {
      if (n_cells(a, j) == 0)
        empty_cells += " (y=" + ds.class_names[j] + ", a=" + ds.group_names[a] + ")";
    }
  }
  if (!empty_groups.empty())
    throw EstimationError("protected group(s) with no rows:" + empty_groups);
  if (smoothing == 0.0 && !empty_cells.empty())
    throw EstimationError("empty (Y, A) cells:" + empty_cells);

  EmpiricalModel em;
  em.num_classes = C;
  em.num_groups = G;
  em.smoothing = smoothing;
  em.n_cells = n_cells;
  em.p_a.resize(G);
  em.p_ya.resize(G, C);
  em.p_yhat_given_a.resize(G, C);
  em.z.assign(G, Eigen::MatrixXd::Zero(C, C));

  for (int a = 0; a < G; ++a) {
    const double n_a = static_cast<double>(n_cells.row(a).sum());
    em.p_a(a) = n_a / N;

    const Eigen::VectorXd y_counts = n_cells.row(a).cast<double>().transpose();
    const Eigen::VectorXd y_given_a =
        (y_counts.array() + smoothing) / (n_a + C * smoothing);
    em.p_ya.row(a) = em.p_a(a) * y_given_a.transpose();

    const Eigen::VectorXd yhat_counts = counts[a].rowwise().sum();
    em.p_yhat_given_a.row(a) =
        ((yhat_counts.array() + smoothing) / (n_a + C * smoothing)).transpose();

    for (int j = 0; j < C; ++j) {
      const double denom = y_counts(j) + C * smoothing;
      em.z[a].col(j) = (counts[a].col(j).array() + smoothing) / denom;
    }
  }

  em.v = build_v(em.z, em.p_ya);
  return em;
}

MatrixStack build_v(const MatrixStack& z, const Eigen::MatrixXd& p_ya) {
  const int G = static_cast<int>(z.size());
  MatrixStack v(G);
  for (int a = 0; a < G; ++a) {
    const int C = static_cast<int>(z[a].rows());
    v[a] = Eigen::MatrixXd::Zero(C, C);
    for (int c = 0; c < C; ++c) {
      double not_c = 0.0;
      for (int cp = 0; cp < C; ++cp)
        if (cp != c) not_c += p_ya(a, cp);
      if (!(not_c > 0.0))
        throw EstimationError("group " + std::to_string(a) +
                              " has a single observed class; false detection rate undefined");
      for (int cp = 0; cp < C; ++cp) {
        if (cp == c) continue;
        v[a].col(c) += z[a].col(cp) * p_ya(a, cp);
      }
      v[a].col(c) /= not_c;
    }
  }
  return v;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j.at(r).size()) != cols)
      throw std::invalid_argument("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

nlohmann::json to_json(const EmpiricalModel& em) {
  auto stack = [](const MatrixStack& s) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& m : s) out.push_back(matrix_to_json(m));
    return out;
  };
  nlohmann::json j;
  j["num_classes"] = em.num_classes;
  j["num_groups"] = em.num_groups;
  j["smoothing"] = em.smoothing;
  j["p_a"] = std::vector<double>(em.p_a.data(), em.p_a.data() + em.p_a.size());
  j["p_ya"] = matrix_to_json(em.p_ya);
  j["z"] = stack(em.z);
  j["v"] = stack(em.v);
  j["p_yhat_given_a"] = matrix_to_json(em.p_yhat_given_a);
  nlohmann::json counts = nlohmann::json::array();
  for (Eigen::Index a = 0; a < em.n_cells.rows(); ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < em.n_cells.cols(); ++c) row.push_back(em.n_cells(a, c));
    counts.push_back(std::move(row));
  }
  j["n_cells"] = std::move(counts);
  return j;
}

}  // namespace mcfair
