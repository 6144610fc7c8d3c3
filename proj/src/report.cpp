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

#include <cstdio>
#include <string>

#include "krig/session.hpp"

namespace krig {

namespace {

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string family_label(const FittedKriging& s) {
  if (s.kernel.is_custom()) return "custom";
  if (s.kernel.family.kind == Family::Custom && !s.kernel.family.custom_name.empty())
    return s.kernel.family.custom_name;
  return std::string(family_name(s.kernel.family.kind));
}

std::string trend_label(const TrendSpec& t) {
  std::string name(trend_kind_name(t.kind));
  if (!t.custom_name.empty()) name += "(" + t.custom_name + ")";
  return name;
}

void output_section(std::string& out, const KrigingModel& model, const FittedKriging& s) {
  out += "Trend\n";
  out += "  Type:             " + trend_label(s.trend) + "\n";
  if (s.trend.reported_degree() >= 0) out += fmt("  Degree:           %d\n", s.trend.reported_degree());
  if (s.trend.kind == TrendKind::Simple) out += fmt("  Value:            %g\n", s.trend.known_constant);
  out += "\n";

  out += "Gaussian Process\n";
  out += "  Corr. Type:       " + s.kernel.describe_type() + "\n";
  out += "  Corr. family:     " + family_label(s) + "\n";
  if (s.kernel.nugget > 0.0) out += fmt("  Nugget:           %e\n", s.kernel.nugget);
  out += fmt("  sigma^2:          %e\n", s.sigma2);
  out += std::string("Estimation method:  ") +
         (s.estimation.method == EstimationMethod::ML ? "Maximum-Likelihood" : "Cross-Validation") +
         "\n\n";

  out += "Hyperparameters\n";
  out += "  theta:\t     [";
  for (Index i = 0; i < s.theta.size(); ++i) out += fmt(" %.5f", s.theta(i));
  out += " ]\n";
  out += "Optim. method:       " + std::string(optim_method_long_name(model.optim_method)) + "\n\n";

  const double n = static_cast<double>(s.size());
  if (s.estimation.method == EstimationMethod::ML) {
    out += fmt("Neg. log-likelihood: %.7e\n", s.objective_value);
  } else if (s.estimation.folds == s.size()) {
    out += fmt("Leave-one-out error: %.7e\n", s.objective_value / n);
  } else {
    out += fmt("%ld-fold CV error: %.7e\n", static_cast<long>(s.estimation.folds),
               s.objective_value / n);
  }
}

}  // namespace

std::string print_report(const KrigingModel& model) {
  const FittedKriging& s = model.primary();
  std::string out;
  out += "Object Name:       " + model.name + "\n";
  out += fmt("Input Dimension:   %ld\n\n", static_cast<long>(s.dim()));
  out += "Experimental Design\n";
  out += "  Sampling:        " + std::string(sampling_name(model.sampling)) + "\n";
  out += fmt("  X size:          [%ldx%ld]\n", static_cast<long>(s.size()), static_cast<long>(s.dim()));
  out += fmt("  Y size:          [%ldx%ld]\n\n", static_cast<long>(s.size()),
             static_cast<long>(model.n_outputs()));
  for (Index k = 0; k < model.n_outputs(); ++k) {
    if (model.n_outputs() > 1) out += fmt("Output %ld\n", static_cast<long>(k + 1));
    output_section(out, model, *model.outputs[static_cast<std::size_t>(k)]);
    if (k + 1 < model.n_outputs()) out += "\n";
  }
  return out;
}

}  // namespace krig
