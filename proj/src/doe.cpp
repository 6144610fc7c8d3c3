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

#include "krig/doe.hpp"

#include <numeric>
#include <string>

namespace krig {

void InputModel::validate() const {
  if (marginals.empty()) throw Error(ErrorCode::Config, "input model has no marginals");
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    const auto& m = marginals[i];
    if (!(m.lower < m.upper))
      throw Error(ErrorCode::Config, "marginal " + std::to_string(i + 1) +
                                         ": lower bound must be below upper bound");
  }
}

namespace {

double map_uniform(const UniformMarginal& m, double u) {
  return m.lower + (m.upper - m.lower) * u;
}

}  // namespace

MatrixXd sample_lhs(const InputModel& input, Index n, RandomStream& stream) {
  input.validate();
  if (n < 1) throw Error(ErrorCode::DomainError, "sample_lhs: need at least one sample");
  const Index m = input.dim();
  MatrixXd x(n, m);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index j = 0; j < m; ++j) {
    std::iota(perm.begin(), perm.end(), Index{0});
    // Fisher-Yates with our own integer draws so the order is portable.
    for (Index i = n - 1; i > 0; --i) {
      const auto k = static_cast<Index>(stream.below(static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[i], perm[k]);
    }
    for (Index i = 0; i < n; ++i) {
      double u = (static_cast<double>(perm[i]) + stream.uniform()) / static_cast<double>(n);
      // Guard the stratum edge against rounding up into the next stratum.
      const double upper_edge = static_cast<double>(perm[i] + 1) / static_cast<double>(n);
      if (u >= upper_edge) u = std::nextafter(upper_edge, 0.0);
      x(i, j) = map_uniform(input.marginals[j], u);
    }
  }
  return x;
}

MatrixXd sample_mc(const InputModel& input, Index n, RandomStream& stream) {
  input.validate();
  if (n < 0) throw Error(ErrorCode::DomainError, "sample_mc: negative sample size");
  const Index m = input.dim();
  MatrixXd x(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) x(i, j) = map_uniform(input.marginals[j], stream.uniform());
  return x;
}

ScalingRecord ScalingRecord::identity(Index dim) {
  return {false, VectorXd::Zero(dim), VectorXd::Ones(dim)};
}

Standardized standardize(const MatrixXd& x) {
  const Index n = x.rows();
  if (n < 2) throw Error(ErrorCode::ZeroVariance, "standardize: need at least two points");
  ScalingRecord rec;
  rec.enabled = true;
  rec.means = x.colwise().mean().transpose();
  rec.stds.resize(x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - rec.means(j)).square().sum() / static_cast<double>(n);
    if (!(var > 0.0))
      throw Error(ErrorCode::ZeroVariance,
                  "input column " + std::to_string(j + 1) +
                      " is constant; disable scaling (Scaling = false) to fit this design");
    rec.stds(j) = std::sqrt(var);
  }
  return {apply_scaling(rec, x), rec};
}

MatrixXd apply_scaling(const ScalingRecord& record, const MatrixXd& x) {
  if (!record.enabled) return x;
  if (x.rows() > 0 && x.cols() != record.means.size())
    throw Error(ErrorCode::DimensionMismatch, "apply_scaling: column count mismatch");
  MatrixXd u(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j)
    u.col(j) = (x.col(j).array() - record.means(j)) / record.stds(j);
  return u;
}

MatrixXd undo_scaling(const ScalingRecord& record, const MatrixXd& u) {
  if (!record.enabled) return u;
  MatrixXd x(u.rows(), u.cols());
  for (Index j = 0; j < u.cols(); ++j)
    x.col(j) = u.col(j).array() * record.stds(j) + record.means(j);
  return x;
}

}  // namespace krig
