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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "krig/numeric.hpp"

namespace krig {

struct FittedKriging;

enum class TrendKind { Simple, Ordinary, Polynomial, CustomBasis, CustomF, ModelMean };

std::string_view trend_kind_name(TrendKind kind);

using BasisFunction = std::function<double(const VectorXd& x)>;
using FBuilder = std::function<MatrixXd(const MatrixXd& x)>;

struct TrendSpec {
  TrendKind kind = TrendKind::Ordinary;
  double known_constant = 0.0;  // simple only
  int degree = 0;               // polynomial only
  std::vector<BasisFunction> basis_functions;
  FBuilder f_builder;
  std::shared_ptr<const FittedKriging> parent;  // model-mean only
  /// Registry name of the custom basis / F builder, for serialization.
  std::string custom_name;

  static TrendSpec simple(double constant);
  static TrendSpec ordinary();
  static TrendSpec polynomial(int degree);
  static TrendSpec model_mean(std::shared_ptr<const FittedKriging> parent);

  /// Custom kinds see user coordinates; the rest see the internal
  /// (possibly standardized) ones.
  bool uses_user_coordinates() const;
  /// Constant folded into the residual; non-zero only for simple Kriging.
  double offset() const { return kind == TrendKind::Simple ? known_constant : 0.0; }
  /// Reported degree: 0 for constant trends, -1 when not meaningful.
  int reported_degree() const;
};

/// Exponent tuples of all monomials up to `degree` in `dim` variables,
/// graded-lexicographic with each cross term once.
std::vector<std::vector<int>> monomial_exponents(Index dim, int degree);

VectorXd basis_vector(const TrendSpec& spec, const VectorXd& x);

/// Rows are basis_vector(x_i). N x 0 for simple Kriging.
MatrixXd information_matrix(const TrendSpec& spec, const MatrixXd& x);

}  // namespace krig
