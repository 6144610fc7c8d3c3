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

#pragma once

#include <vector>

#include "krig/numeric.hpp"

namespace krig {

struct UniformMarginal {
  double lower = 0.0;
  double upper = 1.0;
};

/// Independent uniform marginals; the only input model supported.
struct InputModel {
  std::vector<UniformMarginal> marginals;

  Index dim() const { return static_cast<Index>(marginals.size()); }
  void validate() const;
};

/// Latin hypercube: one point per equal-probability stratum in every
/// dimension, strata order permuted independently per dimension.
MatrixXd sample_lhs(const InputModel& input, Index n, RandomStream& stream);

/// Plain Monte Carlo sample.
MatrixXd sample_mc(const InputModel& input, Index n, RandomStream& stream);

/// Per-column standardization u = (x - mean) / std, population convention.
struct ScalingRecord {
  bool enabled = false;
  VectorXd means;
  VectorXd stds;

  static ScalingRecord identity(Index dim);
};

struct Standardized {
  MatrixXd u;
  ScalingRecord record;
};

Standardized standardize(const MatrixXd& x);
MatrixXd apply_scaling(const ScalingRecord& record, const MatrixXd& x);
MatrixXd undo_scaling(const ScalingRecord& record, const MatrixXd& u);

}  // namespace krig
