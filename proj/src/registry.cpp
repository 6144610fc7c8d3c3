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

#include "krig/registry.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "krig/error.hpp"
#include "krig/session.hpp"

namespace krig {

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, TrueModel, std::less<>> models;
  std::map<std::string, CustomKernel, std::less<>> kernels;
  std::map<std::string, CustomTrend, std::less<>> trends;

  Registry() {
    models["branin"] = [](const MatrixXd& x) { return demo_branin(x); };
    models["xsinx"] = [](const MatrixXd& x) {
      if (x.cols() != 1) throw Error(ErrorCode::DimensionMismatch, "xsinx expects 1-D inputs");
      return VectorXd(x.col(0).array() * x.col(0).array().sin());
    };
    models["forrester-hf"] = [](const MatrixXd& x) {
      if (x.cols() != 1) throw Error(ErrorCode::DimensionMismatch, "forrester-hf expects 1-D inputs");
      VectorXd y(x.rows());
      for (Index i = 0; i < x.rows(); ++i) y(i) = demo_multifidelity(x(i, 0)).hf;
      return y;
    };
    models["forrester-lf"] = [](const MatrixXd& x) {
      if (x.cols() != 1) throw Error(ErrorCode::DimensionMismatch, "forrester-lf expects 1-D inputs");
      VectorXd y(x.rows());
      for (Index i = 0; i < x.rows(); ++i) y(i) = demo_multifidelity(x(i, 0)).lf;
      return y;
    };
    kernels["fault"] = fault_kernel();
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

template <typename Map>
std::string known_names(const Map& m) {
  std::string out;
  for (const auto& [k, v] : m) out += (out.empty() ? "" : ", ") + k;
  return out;
}

}  // namespace

void register_model(const std::string& name, TrueModel model) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.models[name] = std::move(model);
}

TrueModel lookup_model(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  const auto it = r.models.find(name);
  if (it == r.models.end())
    throw Error(ErrorCode::Config, "unknown true model '" + std::string(name) +
                                       "' (known: " + known_names(r.models) + ")");
  return it->second;
}

std::vector<std::string> model_names() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> out;
  for (const auto& [k, v] : r.models) out.push_back(k);
  return out;
}

void register_kernel(const std::string& name, CustomKernel kernel) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  kernel.name = name;
  r.kernels[name] = std::move(kernel);
}

CustomKernel lookup_kernel(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  const auto it = r.kernels.find(name);
  if (it == r.kernels.end())
    throw Error(ErrorCode::Config, "unknown correlation handle '" + std::string(name) +
                                       "' (known: " + known_names(r.kernels) + ")");
  return it->second;
}

void register_trend(const std::string& name, CustomTrend trend) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.trends[name] = std::move(trend);
}

TrendSpec lookup_trend(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  const auto it = r.trends.find(name);
  if (it == r.trends.end())
    throw Error(ErrorCode::Config, "unknown trend handle '" + std::string(name) +
                                       "' (known: " + known_names(r.trends) + ")");
  TrendSpec t;
  t.custom_name = std::string(name);
  if (it->second.f_builder) {
    t.kind = TrendKind::CustomF;
    t.f_builder = it->second.f_builder;
  } else {
    t.kind = TrendKind::CustomBasis;
    t.basis_functions = it->second.basis;
  }
  return t;
}

}  // namespace krig
