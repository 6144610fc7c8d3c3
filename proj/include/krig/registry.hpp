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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "krig/kernels.hpp"
#include "krig/trends.hpp"

namespace krig {

/// Named plug-ins so that configuration files can refer to user code.
/// Registration is thread-safe; built-ins are registered on first use.

using TrueModel = std::function<VectorXd(const MatrixXd& x)>;

/// A custom trend: either a whole F builder or a list of basis functions.
struct CustomTrend {
  FBuilder f_builder;
  std::vector<BasisFunction> basis;
};

void register_model(const std::string& name, TrueModel model);
TrueModel lookup_model(std::string_view name);
std::vector<std::string> model_names();

void register_kernel(const std::string& name, CustomKernel kernel);
CustomKernel lookup_kernel(std::string_view name);

void register_trend(const std::string& name, CustomTrend trend);
/// Builds a TrendSpec of kind CustomF or CustomBasis from a registered trend.
TrendSpec lookup_trend(std::string_view name);

}  // namespace krig
