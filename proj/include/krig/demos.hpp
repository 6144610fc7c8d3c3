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
#include <string>
#include <string_view>
#include <vector>

#include "krig/session.hpp"

namespace krig {

struct DemoOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Branin-Hoo fit on an n-point LHS design with default options, validated
/// on a 20 x 20 grid.
struct BraninRun {
  KrigingModel model;
  MatrixXd x_val;
  VectorXd y_val;
  double nrmse = 0.0;
};
BraninRun run_branin(Index n, const DemoOptions& options);

/// Two-level fit on the synthetic fidelity pair, compared against a fit to
/// the high-fidelity points alone on a 40-point validation grid.
struct HierarchicalRun {
  KrigingModel lf;
  KrigingModel hierarchical;
  KrigingModel hf_only;
  MatrixXd x_val;
  VectorXd y_val;
  double nrmse_hierarchical = 0.0;
  double nrmse_hf_only = 0.0;
};
HierarchicalRun run_hierarchical(Index n_lf, Index n_hf, const DemoOptions& options);

/// Fault-field inversion: sample the field at three boreholes, fit the fault
/// kernel by ML + HGA and compare the estimated parameters with the truth.
/// With grid_n > 0 the field is drawn jointly on a grid_n x grid_n grid of
/// cell centres as well.
struct FaultRun {
  FaultKernelParams truth;
  MatrixXd x;
  VectorXd y;
  KrigingModel model;
  VectorXd theta_hat;
  MatrixXd grid;
  VectorXd grid_truth;
};
FaultRun run_fault(Index per_hole, Index grid_n, const DemoOptions& options);

ModelConfig fault_model_config(const MatrixXd& x, const VectorXd& y, std::uint64_t seed);

/// A named end-to-end scenario and the files it writes.
struct DemoFile {
  std::string name;
  std::string content;
};

std::vector<std::string> demo_names();
std::vector<DemoFile> run_demo(std::string_view name, const DemoOptions& options);

}  // namespace krig
