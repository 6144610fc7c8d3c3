/*
 * Copyright 2026 The krig Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Random but well-conditioned Kriging instances shared by the tests.

#pragma once

#include <Eigen/Eigenvalues>

#include "krig/gp.hpp"

namespace fixture {

using namespace krig;

inline const Family kFamilies[] = {Family::Linear, Family::Exponential, Family::Matern32,
                                   Family::Matern52, Family::Gaussian};

inline MatrixXd uniform_matrix(RandomStream& s, Index n, Index m) {
  MatrixXd x(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) x(i, j) = s.uniform();
  return x;
}

inline double condition(const MatrixXd& r) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> e(r);
  const double lo = e.eigenvalues().minCoeff();
  return lo > 0 ? e.eigenvalues().maxCoeff() / lo : INFINITY;
}

struct Instance {
  KrigingProblem problem;
  VectorXd theta;
};

/// X ~ U[0,1]^M, smooth-plus-noise responses, theta shrunk until
/// cond(R) <= max_cond so that double-precision results can be compared
/// against long-double oracles at tight tolerances.
inline Instance random_instance(RandomStream& s, Index n, Index m, Family family, Composition comp,
                                const TrendSpec& trend, double max_cond = 1e7) {
  KernelSpec k;
  k.family.kind = family;
  k.composition = comp;
  k.dim = m;
  const MatrixXd x = uniform_matrix(s, n, m);
  VectorXd y(n);
  for (Index i = 0; i < n; ++i) y(i) = std::sin(3.0 * x.row(i).sum()) + 0.5 * x(i, 0) + 0.3 * s.normal();
  Instance inst{make_problem(k, trend, x, y, ScalingRecord::identity(m)), VectorXd(m)};
  for (Index j = 0; j < m; ++j) inst.theta(j) = 0.2 + 0.5 * s.uniform();
  for (int tries = 0; tries < 200; ++tries) {
    if (condition(build_corr_matrix(k, x, inst.theta)) <= max_cond) return inst;
    inst.theta *= 0.8;
  }
  return inst;
}

}  // namespace fixture
