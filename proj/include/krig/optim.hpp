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

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "krig/numeric.hpp"

namespace krig {

using Objective = std::function<double(const VectorXd&)>;

/// Box-constrained minimization problem. Objectives must be pure: the GA may
/// evaluate them from several threads at once.
struct OptimProblem {
  Objective objective;
  VectorXd lower;
  VectorXd upper;
  std::optional<VectorXd> initial;

  Index dim() const { return lower.size(); }
  void validate() const;
  VectorXd midpoint() const { return 0.5 * (lower + upper); }
  VectorXd clamp(const VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
};

enum class StopReason { GradientTol, StepTol, MaxIter, GenerationStall };

std::string_view stop_reason_name(StopReason reason);

struct TracePoint {
  Index iteration = 0;
  double best = 0.0;
};

struct OptimResult {
  VectorXd theta_star;
  double objective_star = 0.0;
  Index evaluations = 0;
  std::vector<TracePoint> trace;
  StopReason converged_by = StopReason::MaxIter;
};

struct BfgsOptions {
  double grad_step = 1e-6;  // relative to max(|x_i|, 1)
  double grad_tol = 1e-8;
  double step_tol = 1e-12;
  Index max_iter = 200;
};

struct GaOptions {
  Index pop_size = 30;
  Index max_generations = 50;
  Index tournament_k = 3;
  double crossover_rate = 0.9;
  double blend_alpha = 0.5;
  double mutation_sigma_fraction = 0.1;
  Index elite_count = 2;
  /// Stop after this many generations without improvement; 0 disables.
  Index stall_generations = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct HgaOptions {
  GaOptions ga;
  BfgsOptions bfgs;
};

/// Quasi-Newton descent with central-difference gradients, Armijo
/// backtracking and projection onto the box.
OptimResult minimize_bfgs(const OptimProblem& problem, const BfgsOptions& opts = {});

/// Real-coded genetic algorithm: tournament selection, blend crossover,
/// Gaussian mutation scaled to the box widths, elitism.
OptimResult minimize_ga(const OptimProblem& problem, const GaOptions& opts = {});

/// GA followed by BFGS started at the GA optimum.
OptimResult minimize_hga(const OptimProblem& problem, const HgaOptions& opts = {});

}  // namespace krig
