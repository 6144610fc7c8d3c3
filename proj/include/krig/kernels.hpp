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

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "krig/error.hpp"
#include "krig/numeric.hpp"

namespace krig {

/// One-dimensional correlation families.
enum class Family { Linear, Exponential, Matern32, Matern52, Gaussian, Custom };

enum class Composition { Separable, Ellipsoidal };

std::string_view family_name(Family family);
std::string_view composition_name(Composition composition);
/// Case-insensitive; accepts e.g. "Matern-3_2", "matern-5_2", "gaussian".
Family parse_family(std::string_view name);
Composition parse_composition(std::string_view name);

using FamilyFunction = std::function<double(double h, double theta)>;

struct CorrelationFamily {
  Family kind = Family::Matern52;
  /// Only used when kind == Family::Custom. Must return 1 at h = 0.
  FamilyFunction custom_eval;
  std::string custom_name;
};

/// User kernel computing the whole correlation block R(X1, X2; theta).
using CorrMatrixFunction =
    std::function<MatrixXd(const MatrixXd& x1, const MatrixXd& x2, const VectorXd& theta)>;

struct CustomKernel {
  std::string name;
  Index theta_length = 0;
  CorrMatrixFunction eval;
  /// Parameters flagged here are optimized in log10 coordinates.
  std::vector<bool> log_scaled;
  std::vector<std::string> parameter_names;
};

struct KernelSpec {
  CorrelationFamily family;
  Composition composition = Composition::Ellipsoidal;
  bool isotropic = false;
  double nugget = 0.0;
  Index dim = 1;
  /// When set, family, composition and isotropy are ignored.
  std::optional<CustomKernel> custom;

  bool is_custom() const { return custom.has_value(); }
  Index theta_length() const;
  std::string describe_type() const;
};

/// Built-in family value for distance h >= 0 and length scale theta > 0.
template <typename Scalar>
Scalar eval_family(Family family, Scalar h, Scalar theta) {
  using std::exp;
  using std::sqrt;
  if (!(theta > Scalar(0)))
    throw Error(ErrorCode::DomainError, "correlation family: theta must be positive");
  if (h < Scalar(0)) throw Error(ErrorCode::DomainError, "correlation family: negative distance");
  const Scalar t = h / theta;
  switch (family) {
    case Family::Linear:
      return std::max(Scalar(0), Scalar(1) - t);
    case Family::Exponential:
      return exp(-t);
    case Family::Matern32: {
      const Scalar s = sqrt(Scalar(3)) * t;
      return (Scalar(1) + s) * exp(-s);
    }
    case Family::Matern52: {
      const Scalar s = sqrt(Scalar(5)) * t;
      return (Scalar(1) + s + Scalar(5) * t * t / Scalar(3)) * exp(-s);
    }
    case Family::Gaussian:
      return exp(-t * t);
    case Family::Custom:
      break;
  }
  throw Error(ErrorCode::DomainError, "correlation family: custom family needs an evaluator");
}

double eval_family(const CorrelationFamily& family, double h, double theta);

namespace detail {
void check_theta(const KernelSpec& spec, const VectorXd& theta);
}

/// Correlation between two points. The nugget is not applied here.
template <typename D1, typename D2>
double eval_kernel(const KernelSpec& spec, const Eigen::MatrixBase<D1>& x,
                   const Eigen::MatrixBase<D2>& xp, const VectorXd& theta) {
  if (x.size() != spec.dim || xp.size() != spec.dim)
    throw Error(ErrorCode::DimensionMismatch, "eval_kernel: point dimension differs from kernel dim");
  detail::check_theta(spec, theta);
  if (spec.is_custom()) {
    MatrixXd a(1, spec.dim), b(1, spec.dim);
    for (Index i = 0; i < spec.dim; ++i) {
      a(0, i) = x(i);
      b(0, i) = xp(i);
    }
    const MatrixXd r = spec.custom->eval(a, b, theta);
    if (r.rows() != 1 || r.cols() != 1)
      throw Error(ErrorCode::CustomKernelShape, "custom kernel returned wrong shape");
    return r(0, 0);
  }
  auto length = [&](Index i) { return spec.isotropic ? theta(0) : theta(i); };
  if (spec.composition == Composition::Separable) {
    double value = 1.0;
    for (Index i = 0; i < spec.dim; ++i)
      value *= eval_family(spec.family, std::abs(double(x(i)) - double(xp(i))), length(i));
    return value;
  }
  double h2 = 0.0;
  for (Index i = 0; i < spec.dim; ++i) {
    const double li = length(i);
    if (!(li > 0.0)) throw Error(ErrorCode::DomainError, "eval_kernel: theta must be positive");
    const double d = (double(x(i)) - double(xp(i))) / li;
    h2 += d * d;
  }
  return eval_family(spec.family, std::sqrt(h2), 1.0);
}

/// R_ij = k(x_i, x_j) + nugget * delta_ij over the rows of X.
MatrixXd build_corr_matrix(const KernelSpec& spec, const MatrixXd& x, const VectorXd& theta);

/// N x Nq cross correlations between training rows X and query rows Xq.
MatrixXd build_cross_corr(const KernelSpec& spec, const MatrixXd& x, const MatrixXd& xq,
                          const VectorXd& theta);

/// Prior correlation block among query points (no spec nugget).
MatrixXd build_query_corr(const KernelSpec& spec, const MatrixXd& xq, const VectorXd& theta);

/// k(x, x) for every query row, without the spec nugget.
VectorXd prior_self_correlation(const KernelSpec& spec, const MatrixXd& xq, const VectorXd& theta);

// ---------------------------------------------------------------------------
// Fault-partitioned kernel: two regions separated by a ray from a known fault
// point, each with its own separable Matern 3/2 correlation and no correlation
// across regions.

struct FaultKernelParams {
  Eigen::Vector2d theta1{0.6, 0.25};
  Eigen::Vector2d theta2{0.9, 0.35};
  double alpha = 1.309;
  Eigen::Vector2d fault_point{0.6, 1.0};
  double nugget = 1e-2;

  /// Packed as (theta11, theta12, theta21, theta22, alpha).
  static FaultKernelParams from_packed(const VectorXd& packed);
  VectorXd packed() const;
};

/// 1 for the region whose angle to the fault is <= alpha, else 2.
int fault_region(const FaultKernelParams& params, double x1, double x2);

MatrixXd fault_kernel_matrix(const FaultKernelParams& params, const MatrixXd& x1,
                             const MatrixXd& x2);

/// The fault kernel packaged for registration (5 parameters, angle linear).
CustomKernel fault_kernel();

}  // namespace krig
