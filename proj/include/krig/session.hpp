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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "krig/doe.hpp"
#include "krig/gp.hpp"
#include "krig/kernels.hpp"
#include "krig/optim.hpp"
#include "krig/trends.hpp"

namespace krig {

enum class SamplingMethod { User, LHS, MC };
enum class OptimMethod { BFGS, GA, HGA };

std::string_view sampling_name(SamplingMethod method);
std::string_view optim_method_name(OptimMethod method);
std::string_view optim_method_long_name(OptimMethod method);
SamplingMethod parse_sampling(std::string_view name);
OptimMethod parse_optim_method(std::string_view name);
EstimationMethod parse_estimation(std::string_view name);

struct ExpDesignConfig {
  /// User-supplied design; when absent the design is generated from
  /// `input`, `n_samples` and the registered `true_model`.
  std::optional<MatrixXd> x;
  std::optional<MatrixXd> y;
  SamplingMethod sampling = SamplingMethod::User;
  InputModel input;
  Index n_samples = 0;
  std::string true_model;
};

struct OptimConfig {
  OptimMethod method = OptimMethod::HGA;
  std::optional<VectorXd> lower;
  std::optional<VectorXd> upper;
  std::optional<VectorXd> initial;
  BfgsOptions bfgs;
  GaOptions ga;
};

/// User-facing model configuration. Defaults: ordinary trend, anisotropic
/// ellipsoidal Matern 5/2, leave-one-out CV estimation, HGA optimizer,
/// input scaling on (off for custom kernels and model-mean trends), no nugget.
struct ModelConfig {
  std::string name = "Model 1";
  ExpDesignConfig exp_design;
  TrendSpec trend;
  CorrelationFamily family;
  Composition composition = Composition::Ellipsoidal;
  bool isotropic = false;
  double nugget = 0.0;
  std::optional<CustomKernel> custom_kernel;
  Estimation estimation;
  OptimConfig optim;
  std::optional<bool> scaling;
  std::uint64_t seed = 0;
  JitterPolicy jitter;
};

/// One fitted output; independent fits share the design for multi-column Y.
struct KrigingModel {
  std::string name = "Model 1";
  SamplingMethod sampling = SamplingMethod::User;
  OptimMethod optim_method = OptimMethod::HGA;
  std::vector<std::shared_ptr<const FittedKriging>> outputs;

  const FittedKriging& primary() const { return *outputs.front(); }
  Index n_outputs() const { return static_cast<Index>(outputs.size()); }
};

KrigingModel create_model(const ModelConfig& config);

/// Fit one output column. Exposed for callers that manage designs themselves.
std::shared_ptr<const FittedKriging> fit_output(const ModelConfig& config, const MatrixXd& x,
                                                const VectorXd& y, std::uint64_t stream_key = 0);

struct EvalOptions {
  bool variance = true;
  bool covariance = false;
  std::optional<double> alpha;
};

Prediction eval_model(const KrigingModel& model, const MatrixXd& xq, const EvalOptions& options = {},
                      Index output = 0);

std::string print_report(const KrigingModel& model);

struct ValidationReport {
  Index n_val = 0;
  double nrmse = 0.0;
  VectorXd residuals;
};

/// Sum of squared errors over N times the (population) variance of Y.
double nrmse(const VectorXd& y_true, const VectorXd& y_pred);
ValidationReport validate(const KrigingModel& model, const MatrixXd& x_val, const VectorXd& y_val,
                          Index output = 0);

/// Fits the low-fidelity model, then the high-fidelity one with the
/// low-fidelity mean predictor as its trend and scaling disabled.
KrigingModel fit_hierarchical(const ModelConfig& lf_config, const ModelConfig& hf_config);

// Demo models -----------------------------------------------------------------

VectorXd demo_branin(const MatrixXd& x);
InputModel branin_input();

struct FidelityPair {
  double hf = 0.0;
  double lf = 0.0;
};
FidelityPair demo_multifidelity(double x);

/// Independent zero-mean unit-variance Matern 3/2 fields on the two fault
/// regions, evaluated at the rows of xgrid.
VectorXd demo_fault_field(const MatrixXd& xgrid, const FaultKernelParams& params,
                          RandomStream& stream);

/// Points along vertical boreholes at the given x1 positions.
MatrixXd borehole_locations(const std::vector<double>& x_positions, Index per_hole, double x2_low,
                            double x2_high);

/// Default borehole positions A, B and C used by the fault demo.
std::vector<double> default_borehole_positions();

}  // namespace krig
