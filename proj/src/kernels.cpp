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

#include "krig/kernels.hpp"

#include <algorithm>
#include <cctype>

namespace krig {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Linear: return "linear";
    case Family::Exponential: return "exponential";
    case Family::Matern32: return "matern-3_2";
    case Family::Matern52: return "matern-5_2";
    case Family::Gaussian: return "gaussian";
    case Family::Custom: return "custom";
  }
  return "custom";
}

std::string_view composition_name(Composition composition) {
  return composition == Composition::Separable ? "separable" : "ellipsoidal";
}

Family parse_family(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "linear") return Family::Linear;
  if (s == "exponential" || s == "exp") return Family::Exponential;
  if (s == "matern-3_2" || s == "matern32" || s == "matern-3/2") return Family::Matern32;
  if (s == "matern-5_2" || s == "matern52" || s == "matern-5/2") return Family::Matern52;
  if (s == "gaussian" || s == "squared-exponential") return Family::Gaussian;
  throw Error(ErrorCode::Config, "unknown correlation family '" + std::string(name) + "'");
}

Composition parse_composition(std::string_view name) {
  const std::string s = lowercase(name);
  if (s == "separable") return Composition::Separable;
  if (s == "ellipsoidal") return Composition::Ellipsoidal;
  throw Error(ErrorCode::Config, "unknown correlation type '" + std::string(name) + "'");
}

Index KernelSpec::theta_length() const {
  if (custom) return custom->theta_length;
  return isotropic ? 1 : dim;
}

std::string KernelSpec::describe_type() const {
  if (custom) return "custom(" + custom->name + ")";
  return std::string(composition_name(composition)) + (isotropic ? "(isotropic)" : "(anisotropic)");
}

double eval_family(const CorrelationFamily& family, double h, double theta) {
  if (family.kind != Family::Custom) return eval_family<double>(family.kind, h, theta);
  if (!family.custom_eval)
    throw Error(ErrorCode::DomainError, "custom correlation family has no evaluator");
  if (!(theta > 0.0)) throw Error(ErrorCode::DomainError, "correlation family: theta must be positive");
  if (h < 0.0) throw Error(ErrorCode::DomainError, "correlation family: negative distance");
  return family.custom_eval(h, theta);
}

namespace detail {

void check_theta(const KernelSpec& spec, const VectorXd& theta) {
  if (theta.size() != spec.theta_length())
    throw Error(ErrorCode::ThetaLengthMismatch,
                "kernel expects " + std::to_string(spec.theta_length()) +
                    " hyperparameters, got " + std::to_string(theta.size()));
}

}  // namespace detail

namespace {

void check_columns(const KernelSpec& spec, const MatrixXd& x, const char* what) {
  if (x.cols() != spec.dim)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected " + std::to_string(spec.dim) + " columns, got " +
                    std::to_string(x.cols()));
}

MatrixXd symmetric_builtin(const KernelSpec& spec, const MatrixXd& x, const VectorXd& theta) {
  const Index n = x.rows();
  MatrixXd r(n, n);
  for (Index i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (Index j = i + 1; j < n; ++j) {
      const double v = eval_kernel(spec, x.row(i), x.row(j), theta);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

MatrixXd checked_custom(const KernelSpec& spec, const MatrixXd& x1, const MatrixXd& x2,
                        const VectorXd& theta) {
  MatrixXd r = spec.custom->eval(x1, x2, theta);
  if (r.rows() != x1.rows() || r.cols() != x2.rows())
    throw Error(ErrorCode::CustomKernelShape,
                "custom kernel '" + spec.custom->name + "' returned " + std::to_string(r.rows()) +
                    "x" + std::to_string(r.cols()) + ", expected " + std::to_string(x1.rows()) +
                    "x" + std::to_string(x2.rows()));
  return r;
}

}  // namespace

MatrixXd build_corr_matrix(const KernelSpec& spec, const MatrixXd& x, const VectorXd& theta) {
  check_columns(spec, x, "build_corr_matrix");
  detail::check_theta(spec, theta);
  MatrixXd r;
  if (spec.is_custom()) {
    r = checked_custom(spec, x, x, theta);
    const double asym = r.size() > 0 ? (r - r.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (!(asym <= 1e-10))
      throw Error(ErrorCode::CustomKernelShape,
                  "custom kernel '" + spec.custom->name + "' returned an asymmetric matrix");
    r = 0.5 * (r + r.transpose()).eval();
  } else {
    r = symmetric_builtin(spec, x, theta);
  }
  r.diagonal().array() += spec.nugget;
  return r;
}

MatrixXd build_cross_corr(const KernelSpec& spec, const MatrixXd& x, const MatrixXd& xq,
                          const VectorXd& theta) {
  check_columns(spec, x, "build_cross_corr");
  if (xq.rows() > 0) check_columns(spec, xq, "build_cross_corr");
  detail::check_theta(spec, theta);
  if (xq.rows() == 0) return MatrixXd(x.rows(), 0);
  if (spec.is_custom()) return checked_custom(spec, x, xq, theta);
  MatrixXd r(x.rows(), xq.rows());
  for (Index q = 0; q < xq.rows(); ++q)
    for (Index i = 0; i < x.rows(); ++i) r(i, q) = eval_kernel(spec, x.row(i), xq.row(q), theta);
  return r;
}

MatrixXd build_query_corr(const KernelSpec& spec, const MatrixXd& xq, const VectorXd& theta) {
  if (xq.rows() == 0) return MatrixXd(0, 0);
  check_columns(spec, xq, "build_query_corr");
  detail::check_theta(spec, theta);
  if (spec.is_custom()) {
    MatrixXd r = checked_custom(spec, xq, xq, theta);
    return 0.5 * (r + r.transpose());
  }
  return symmetric_builtin(spec, xq, theta);
}

VectorXd prior_self_correlation(const KernelSpec& spec, const MatrixXd& xq, const VectorXd& theta) {
  if (!spec.is_custom()) return VectorXd::Ones(xq.rows());
  VectorXd d(xq.rows());
  for (Index q = 0; q < xq.rows(); ++q) {
    const MatrixXd point = xq.row(q);
    d(q) = checked_custom(spec, point, point, theta)(0, 0);
  }
  return d;
}

// ---------------------------------------------------------------------------

FaultKernelParams FaultKernelParams::from_packed(const VectorXd& packed) {
  if (packed.size() != 5)
    throw Error(ErrorCode::ThetaLengthMismatch, "fault kernel expects 5 hyperparameters, got " +
                                                    std::to_string(packed.size()));
  FaultKernelParams p;
  p.theta1 = packed.segment<2>(0);
  p.theta2 = packed.segment<2>(2);
  p.alpha = packed(4);
  return p;
}

VectorXd FaultKernelParams::packed() const {
  VectorXd v(5);
  v << theta1, theta2, alpha;
  return v;
}

int fault_region(const FaultKernelParams& params, double x1, double x2) {
  const double dx = x1 - params.fault_point(0);
  const double dy = x2 - params.fault_point(1);
  const double dist = std::sqrt(dx * dx + dy * dy);
  if (dist == 0.0)
    throw Error(ErrorCode::DomainError, "fault kernel: point coincides with the fault point");
  const double c = std::clamp(-dx / dist, -1.0, 1.0);
  return std::acos(c) <= params.alpha ? 1 : 2;
}

MatrixXd fault_kernel_matrix(const FaultKernelParams& params, const MatrixXd& x1,
                             const MatrixXd& x2) {
  if ((x1.rows() > 0 && x1.cols() != 2) || (x2.rows() > 0 && x2.cols() != 2))
    throw Error(ErrorCode::DimensionMismatch, "fault kernel: points must be 2-D");
  if (!(params.theta1.array() > 0.0).all() || !(params.theta2.array() > 0.0).all())
    throw Error(ErrorCode::DomainError, "fault kernel: length scales must be positive");

  std::vector<int> r1(x1.rows()), r2(x2.rows());
  for (Index i = 0; i < x1.rows(); ++i) r1[i] = fault_region(params, x1(i, 0), x1(i, 1));
  for (Index j = 0; j < x2.rows(); ++j) r2[j] = fault_region(params, x2(j, 0), x2(j, 1));

  const bool same_set = x1.rows() == x2.rows() && x1 == x2;
  MatrixXd r = MatrixXd::Zero(x1.rows(), x2.rows());
  for (Index i = 0; i < x1.rows(); ++i) {
    for (Index j = 0; j < x2.rows(); ++j) {
      if (r1[i] != r2[j]) continue;
      const Eigen::Vector2d& ls = r1[i] == 1 ? params.theta1 : params.theta2;
      r(i, j) = eval_family<double>(Family::Matern32, std::abs(x1(i, 0) - x2(j, 0)), ls(0)) *
                eval_family<double>(Family::Matern32, std::abs(x1(i, 1) - x2(j, 1)), ls(1));
    }
    if (same_set) r(i, i) += params.nugget;
  }
  return r;
}

CustomKernel fault_kernel() {
  CustomKernel k;
  k.name = "fault";
  k.theta_length = 5;
  k.eval = [](const MatrixXd& x1, const MatrixXd& x2, const VectorXd& theta) {
    return fault_kernel_matrix(FaultKernelParams::from_packed(theta), x1, x2);
  };
  k.log_scaled = {true, true, true, true, false};
  k.parameter_names = {"theta11", "theta12", "theta21", "theta22", "alpha"};
  return k;
}

}  // namespace krig
