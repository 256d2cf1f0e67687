#pragma once

#include <Eigen/Dense>

#include "mcfair/empirical.hpp"
#include "mcfair/policy.hpp"
#include "mcfair/rng.hpp"

namespace fixtures {

// Column-stochastic C×C matrix with entries drawn from Exp(1), then normalized.
inline Eigen::MatrixXd random_stochastic(int c, mcfair::rng::Engine& eng) {
  Eigen::MatrixXd m(c, c);
  for (int j = 0; j < c; ++j) {
    for (int i = 0; i < c; ++i) m(i, j) = -std::log(1.0 - mcfair::rng::uniform01(eng));
    m.col(j) /= m.col(j).sum();
  }
  return m;
}

inline Eigen::VectorXd random_simplex(int c, mcfair::rng::Engine& eng) {
  Eigen::VectorXd v(c);
  for (int i = 0; i < c; ++i) v(i) = 0.05 + -std::log(1.0 - mcfair::rng::uniform01(eng));
  return v / v.sum();
}

// Self-consistent model built from random conditionals rather than data.
inline mcfair::EmpiricalModel random_model(int c, int g, mcfair::rng::Engine& eng) {
  mcfair::EmpiricalModel em;
  em.num_classes = c;
  em.num_groups = g;
  em.p_a = random_simplex(g, eng);
  em.p_ya = Eigen::MatrixXd(g, c);
  em.p_yhat_given_a = Eigen::MatrixXd(g, c);
  em.n_cells = Eigen::MatrixXi::Constant(g, c, 100);
  for (int a = 0; a < g; ++a) {
    const Eigen::VectorXd py = random_simplex(c, eng);
    em.p_ya.row(a) = em.p_a(a) * py.transpose();
    em.z.push_back(random_stochastic(c, eng));
    em.p_yhat_given_a.row(a) = (em.z[a] * py).transpose();
  }
  em.v = mcfair::build_v(em.z, em.p_ya);
  return em;
}

inline mcfair::AdjustmentPolicy random_policy(int c, int g, mcfair::rng::Engine& eng) {
  mcfair::AdjustmentPolicy p;
  for (int i = 0; i < c; ++i) p.class_names.push_back("c" + std::to_string(i));
  for (int a = 0; a < g; ++a) {
    p.group_names.push_back("g" + std::to_string(a));
    p.p.push_back(random_stochastic(c, eng));
  }
  return p;
}

}  // namespace fixtures
