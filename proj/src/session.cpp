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

#include "krig/session.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "krig/registry.hpp"

namespace krig {

namespace {

std::string lower_case(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Stream keys; distinct sub-streams keep the design, folds and GA
// independent of one another.
constexpr std::uint64_t kDesignKey = 1;
constexpr std::uint64_t kFoldKey = 2;
constexpr std::uint64_t kOptimKey = 3;

KernelSpec kernel_for(const ModelConfig& config, Index dim) {
  KernelSpec spec;
  spec.dim = dim;
  spec.nugget = config.nugget;
  if (config.custom_kernel) {
    spec.custom = config.custom_kernel;
    spec.family.kind = Family::Custom;
  } else {
    spec.family = config.family;
    spec.composition = config.composition;
    spec.isotropic = config.isotropic;
  }
  if (!(spec.nugget >= 0.0) || !std::isfinite(spec.nugget))
    throw Error(ErrorCode::Config, "Corr.Nugget must be a finite non-negative number");
  return spec;
}

void check_duplicates(const MatrixXd& x) {
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = i + 1; j < x.rows(); ++j)
      if (x.row(i) == x.row(j))
        throw Error(ErrorCode::DuplicatePoints,
                    "experimental design rows " + std::to_string(i + 1) + " and " +
                        std::to_string(j + 1) +
                        " are identical; remove one or set a positive Corr.Nugget");
}

void check_length(const std::optional<VectorXd>& v, Index expected, const char* what) {
  if (v && v->size() != expected)
    throw Error(ErrorCode::Config, std::string(what) + " has length " + std::to_string(v->size()) +
                                       " but the correlation function has " +
                                       std::to_string(expected) + " hyperparameters");
}

struct Box {
  VectorXd lower;
  VectorXd upper;
};

Box default_bounds(const KrigingProblem& problem) {
  const Index d = problem.dim();
  VectorXd width(d);
  for (Index j = 0; j < d; ++j) {
    const double w = problem.x.col(j).maxCoeff() - problem.x.col(j).minCoeff();
    width(j) = w > 0.0 ? w : 1.0;
  }
  if (problem.kernel.isotropic) width = VectorXd::Constant(1, width.maxCoeff());
  return {1e-3 * width, 10.0 * width};
}

}  // namespace

std::string_view sampling_name(SamplingMethod method) {
  switch (method) {
    case SamplingMethod::User: return "User";
    case SamplingMethod::LHS: return "LHS";
    case SamplingMethod::MC: return "MC";
  }
  return "?";
}

std::string_view optim_method_name(OptimMethod method) {
  switch (method) {
    case OptimMethod::BFGS: return "BFGS";
    case OptimMethod::GA: return "GA";
    case OptimMethod::HGA: return "HGA";
  }
  return "?";
}

std::string_view optim_method_long_name(OptimMethod method) {
  switch (method) {
    case OptimMethod::BFGS: return "BFGS";
    case OptimMethod::GA: return "Genetic Algorithm";
    case OptimMethod::HGA: return "Hybrid Genetic Algorithm";
  }
  return "?";
}

SamplingMethod parse_sampling(std::string_view name) {
  const auto s = lower_case(name);
  if (s == "user") return SamplingMethod::User;
  if (s == "lhs") return SamplingMethod::LHS;
  if (s == "mc") return SamplingMethod::MC;
  throw Error(ErrorCode::Config, "unknown sampling method '" + std::string(name) + "' (use LHS or MC)");
}

OptimMethod parse_optim_method(std::string_view name) {
  const auto s = lower_case(name);
  if (s == "bfgs") return OptimMethod::BFGS;
  if (s == "ga") return OptimMethod::GA;
  if (s == "hga") return OptimMethod::HGA;
  throw Error(ErrorCode::Config,
              "unknown optimization method '" + std::string(name) + "' (use BFGS, GA or HGA)");
}

EstimationMethod parse_estimation(std::string_view name) {
  const auto s = lower_case(name);
  if (s == "ml") return EstimationMethod::ML;
  if (s == "cv") return EstimationMethod::CV;
  throw Error(ErrorCode::Config, "unknown estimation method '" + std::string(name) + "' (use ML or CV)");
}

std::shared_ptr<const FittedKriging> fit_output(const ModelConfig& config, const MatrixXd& x,
                                                const VectorXd& y, std::uint64_t stream_key) {
  const KernelSpec kernel = kernel_for(config, x.cols());
  const Index n = x.rows();
  if (n < 1) throw Error(ErrorCode::Data, "experimental design is empty");
  if (config.trend.kind == TrendKind::ModelMean && !config.trend.parent)
    throw Error(ErrorCode::ParentModelUnfitted, "model-mean trend has no fitted parent model");

  bool scaling = config.scaling.value_or(!kernel.is_custom() &&
                                         config.trend.kind != TrendKind::ModelMean);
  if (n < 2) scaling = false;
  ScalingRecord record = ScalingRecord::identity(x.cols());
  if (scaling) record = standardize(x).record;

  if (kernel.nugget == 0.0 && !kernel.is_custom()) check_duplicates(x);

  KrigingProblem problem = make_problem(kernel, config.trend, x, y, record);
  problem.jitter = config.jitter;

  const Index len = kernel.theta_length();
  const auto& oc = config.optim;
  check_length(oc.lower, len, "Optim.Bounds lower row");
  check_length(oc.upper, len, "Optim.Bounds upper row");
  check_length(oc.initial, len, "Optim.InitialValue");
  if (oc.lower.has_value() != oc.upper.has_value())
    throw Error(ErrorCode::Config, "Optim.Bounds needs both a lower and an upper row");
  Box box;
  if (oc.lower) {
    box = {*oc.lower, *oc.upper};
  } else if (kernel.is_custom()) {
    throw Error(ErrorCode::Config, "a custom correlation function requires Optim.Bounds with " +
                                       std::to_string(len) + " entries per row");
  } else {
    box = default_bounds(problem);
  }
  for (Index i = 0; i < len; ++i)
    if (!std::isfinite(box.lower(i)) || !std::isfinite(box.upper(i)) || box.lower(i) > box.upper(i))
      throw Error(ErrorCode::Config, "Optim.Bounds entry " + std::to_string(i + 1) +
                                         " is not a finite interval with lower <= upper");

  std::vector<bool> logs(static_cast<std::size_t>(len), !kernel.is_custom());
  if (kernel.is_custom() && kernel.custom->log_scaled.size() == static_cast<std::size_t>(len))
    logs = kernel.custom->log_scaled;
  for (Index i = 0; i < len; ++i)
    if (logs[static_cast<std::size_t>(i)] && !(box.lower(i) > 0.0))
      throw Error(ErrorCode::Config, "Optim.Bounds lower entry " + std::to_string(i + 1) +
                                         " must be positive for a length scale");
  problem.lower = box.lower;
  problem.upper = box.upper;

  auto to_search = [&](VectorXd t) {
    for (Index i = 0; i < len; ++i)
      if (logs[static_cast<std::size_t>(i)]) t(i) = std::log10(t(i));
    return t;
  };
  auto to_theta = [&](VectorXd t) {
    for (Index i = 0; i < len; ++i)
      if (logs[static_cast<std::size_t>(i)]) t(i) = std::pow(10.0, t(i));
    return t;
  };

  Estimation est = config.estimation;
  // Cross-validation needs at least two points; one-point designs fall
  // back to the likelihood estimate of sigma^2.
  if (n < 2) est.method = EstimationMethod::ML;
  const RandomStream root(config.seed);
  const RandomStream stream = root.child(stream_key);
  Folds folds;
  if (est.method == EstimationMethod::CV) {
    const Index k = est.folds == 0 ? n : est.folds;
    if (k < 2 || k > n)
      throw Error(ErrorCode::Config, "CV.Folds must be between 2 and N = " + std::to_string(n) +
                                         ", got " + std::to_string(k));
    est.folds = k;
    RandomStream fs = stream.child(kFoldKey);
    folds = cv_partition(n, k, fs);
  }
  const bool loo = est.method == EstimationMethod::CV && est.folds == n;

  auto theta_objective = [&](const VectorXd& theta) {
    if (est.method == EstimationMethod::ML) return nll_profile(theta, problem);
    if (loo) return loo_fast(theta, problem).objective;
    return cv_objective(theta, problem, folds);
  };

  VectorXd theta;
  double objective = 0.0;
  if ((box.lower.array() == box.upper.array()).all()) {
    theta = box.lower;
    objective = theta_objective(theta);
  } else {
    OptimProblem op;
    op.lower = to_search(box.lower);
    op.upper = to_search(box.upper);
    if (oc.initial) op.initial = op.clamp(to_search(*oc.initial));
    op.objective = [&](const VectorXd& t) { return theta_objective(to_theta(t)); };
    GaOptions ga = oc.ga;
    ga.seed = stream.child(kOptimKey).seed() ^ oc.ga.seed;
    OptimResult res;
    switch (oc.method) {
      case OptimMethod::BFGS: res = minimize_bfgs(op, oc.bfgs); break;
      case OptimMethod::GA: res = minimize_ga(op, ga); break;
      case OptimMethod::HGA: res = minimize_hga(op, HgaOptions{ga, oc.bfgs}); break;
    }
    theta = to_theta(res.theta_star).cwiseMax(box.lower).cwiseMin(box.upper);
    objective = theta_objective(theta);
  }
  if (!(objective < kPenalty))
    throw Error(ErrorCode::NotPositiveDefinite,
                "no hyperparameter value within the bounds gives a usable correlation matrix");

  FittedKriging fitted = est.method == EstimationMethod::ML
                             ? assemble(problem, theta)
                             : assemble(problem, theta, cv_sigma2(theta, problem, folds));
  fitted.estimation = est;
  fitted.objective_value = objective;
  return std::make_shared<const FittedKriging>(std::move(fitted));
}

KrigingModel create_model(const ModelConfig& config) {
  const auto& ed = config.exp_design;
  KrigingModel model;
  model.name = config.name;
  model.optim_method = config.optim.method;

  MatrixXd x;
  if (ed.x) {
    x = *ed.x;
    model.sampling = SamplingMethod::User;
  } else {
    if (ed.n_samples < 1)
      throw Error(ErrorCode::Config, "ExpDesign needs either X or a positive NSamples");
    if (ed.input.dim() < 1)
      throw Error(ErrorCode::Config, "ExpDesign.NSamples requires Input.Marginals");
    ed.input.validate();
    RandomStream s = RandomStream(config.seed).child(kDesignKey);
    model.sampling = ed.sampling == SamplingMethod::MC ? SamplingMethod::MC : SamplingMethod::LHS;
    x = model.sampling == SamplingMethod::MC ? sample_mc(ed.input, ed.n_samples, s)
                                             : sample_lhs(ed.input, ed.n_samples, s);
  }

  MatrixXd y;
  if (ed.y) {
    y = *ed.y;
  } else if (!ed.true_model.empty()) {
    y = lookup_model(ed.true_model)(x);
  } else {
    throw Error(ErrorCode::Config, "ExpDesign needs Y or a TrueModel to evaluate");
  }
  if (y.rows() != x.rows())
    throw Error(ErrorCode::DimensionMismatch, "X has " + std::to_string(x.rows()) +
                                                  " rows but Y has " + std::to_string(y.rows()));
  if (y.cols() < 1) throw Error(ErrorCode::Data, "Y has no columns");

  for (Index j = 0; j < y.cols(); ++j)
    model.outputs.push_back(fit_output(config, x, y.col(j), static_cast<std::uint64_t>(j)));
  return model;
}

Prediction eval_model(const KrigingModel& model, const MatrixXd& xq, const EvalOptions& options,
                      Index output) {
  if (output < 0 || output >= model.n_outputs())
    throw Error(ErrorCode::DimensionMismatch, "output index out of range");
  const Want want = options.covariance ? Want::MeanCovariance
                    : options.variance ? Want::MeanVariance
                                       : Want::Mean;
  return predict(*model.outputs[static_cast<std::size_t>(output)], xq, want, options.alpha);
}

double nrmse(const VectorXd& y_true, const VectorXd& y_pred) {
  if (y_true.size() != y_pred.size())
    throw Error(ErrorCode::DimensionMismatch, "nrmse: size mismatch");
  const double n = static_cast<double>(y_true.size());
  if (y_true.size() == 0) throw Error(ErrorCode::Data, "nrmse: empty validation set");
  const double var = (y_true.array() - y_true.mean()).square().sum() / n;
  if (!(var > 0.0))
    throw Error(ErrorCode::ZeroVariance, "nrmse: validation responses have zero variance");
  return (y_true - y_pred).squaredNorm() / (n * var);
}

ValidationReport validate(const KrigingModel& model, const MatrixXd& x_val, const VectorXd& y_val,
                          Index output) {
  const VectorXd mu = eval_model(model, x_val, {.variance = false}, output).mean;
  ValidationReport r;
  r.n_val = y_val.size();
  r.nrmse = nrmse(y_val, mu);
  r.residuals = y_val - mu;
  return r;
}

KrigingModel fit_hierarchical(const ModelConfig& lf_config, const ModelConfig& hf_config) {
  const KrigingModel lf = create_model(lf_config);
  ModelConfig hf = hf_config;
  hf.trend = TrendSpec::model_mean(lf.outputs.front());
  hf.scaling = false;
  return create_model(hf);
}

// Demo models -----------------------------------------------------------------

VectorXd demo_branin(const MatrixXd& x) {
  if (x.cols() != 2)
    throw Error(ErrorCode::DimensionMismatch, "branin expects 2 input columns, got " +
                                                  std::to_string(x.cols()));
  constexpr double pi = std::numbers::pi;
  VectorXd y(x.rows());
  for (Index i = 0; i < x.rows(); ++i) {
    const double x1 = x(i, 0), x2 = x(i, 1);
    const double a = x2 - 5.1 / (4.0 * pi * pi) * x1 * x1 + 5.0 / pi * x1 - 6.0;
    y(i) = a * a + 10.0 * (1.0 - 1.0 / (8.0 * pi)) * std::cos(x1) + 10.0;
  }
  return y;
}

InputModel branin_input() { return InputModel{{{-5.0, 10.0}, {0.0, 15.0}}}; }

FidelityPair demo_multifidelity(double x) {
  const double a = 6.0 * x - 2.0;
  const double hf = a * a * std::sin(12.0 * x - 4.0);
  return {hf, 0.5 * hf + 10.0 * (x - 0.5) - 5.0};
}

VectorXd demo_fault_field(const MatrixXd& xgrid, const FaultKernelParams& params,
                          RandomStream& stream) {
  if (xgrid.cols() != 2)
    throw Error(ErrorCode::DimensionMismatch, "fault field expects 2 input columns");
  const Index n = xgrid.rows();
  VectorXd field = VectorXd::Zero(n);
  const std::uint64_t seeds[2] = {stream.next_u64(), stream.next_u64()};
  for (int region = 1; region <= 2; ++region) {
    std::vector<Index> idx;
    for (Index i = 0; i < n; ++i)
      if (fault_region(params, xgrid(i, 0), xgrid(i, 1)) == region) idx.push_back(i);
    MatrixXd pts(static_cast<Index>(idx.size()), 2);
    for (std::size_t k = 0; k < idx.size(); ++k) pts.row(static_cast<Index>(k)) = xgrid.row(idx[k]);
    KernelSpec spec;
    spec.dim = 2;
    spec.family.kind = Family::Matern32;
    spec.composition = Composition::Separable;
    const VectorXd theta = region == 1 ? VectorXd(params.theta1) : VectorXd(params.theta2);
    if (idx.empty()) continue;
    RandomStream sub(seeds[region - 1]);
    const MatrixXd r = build_corr_matrix(spec, pts, theta);
    const auto chol = cholesky_with_jitter(r, JitterPolicy{});
    const VectorXd v = chol.lower * standard_normal_draws(sub, pts.rows());
    for (std::size_t k = 0; k < idx.size(); ++k) field(idx[k]) = v(static_cast<Index>(k));
  }
  return field;
}

MatrixXd borehole_locations(const std::vector<double>& x_positions, Index per_hole, double x2_low,
                            double x2_high) {
  if (per_hole < 1) throw Error(ErrorCode::Config, "boreholes need at least one point each");
  MatrixXd pts(static_cast<Index>(x_positions.size()) * per_hole, 2);
  Index row = 0;
  for (double xp : x_positions)
    for (Index k = 0; k < per_hole; ++k) {
      const double t = per_hole == 1 ? 0.5 : static_cast<double>(k) / static_cast<double>(per_hole - 1);
      pts(row, 0) = xp;
      pts(row, 1) = x2_low + t * (x2_high - x2_low);
      ++row;
    }
  return pts;
}

std::vector<double> default_borehole_positions() { return {0.2, 0.45, 0.8}; }

}  // namespace krig
