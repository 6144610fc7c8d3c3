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

#include "krig/trends.hpp"

#include <string>

#include "krig/gp.hpp"

namespace krig {

std::string_view trend_kind_name(TrendKind kind) {
  switch (kind) {
    case TrendKind::Simple: return "simple";
    case TrendKind::Ordinary: return "ordinary";
    case TrendKind::Polynomial: return "polynomial";
    case TrendKind::CustomBasis: return "custom-basis";
    case TrendKind::CustomF: return "custom";
    case TrendKind::ModelMean: return "model-mean";
  }
  return "unknown";
}

TrendSpec TrendSpec::simple(double constant) {
  TrendSpec t;
  t.kind = TrendKind::Simple;
  t.known_constant = constant;
  return t;
}

TrendSpec TrendSpec::ordinary() { return TrendSpec{}; }

TrendSpec TrendSpec::polynomial(int degree) {
  if (degree < 1) throw Error(ErrorCode::Config, "polynomial trend degree must be >= 1");
  TrendSpec t;
  t.kind = TrendKind::Polynomial;
  t.degree = degree;
  return t;
}

TrendSpec TrendSpec::model_mean(std::shared_ptr<const FittedKriging> parent) {
  TrendSpec t;
  t.kind = TrendKind::ModelMean;
  t.parent = std::move(parent);
  return t;
}

bool TrendSpec::uses_user_coordinates() const {
  return kind == TrendKind::CustomBasis || kind == TrendKind::CustomF ||
         kind == TrendKind::ModelMean;
}

int TrendSpec::reported_degree() const {
  switch (kind) {
    case TrendKind::Simple:
    case TrendKind::Ordinary: return 0;
    case TrendKind::Polynomial: return degree;
    default: return -1;
  }
}

std::vector<std::vector<int>> monomial_exponents(Index dim, int degree) {
  std::vector<std::vector<int>> out;
  // For each total degree, walk non-decreasing index tuples in lexicographic
  // order; each tuple is one monomial.
  for (int total = 0; total <= degree; ++total) {
    std::vector<Index> idx(static_cast<std::size_t>(total), 0);
    while (true) {
      std::vector<int> e(static_cast<std::size_t>(dim), 0);
      for (Index i : idx) ++e[static_cast<std::size_t>(i)];
      out.push_back(std::move(e));
      int pos = total - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == dim - 1) --pos;
      if (pos < 0) break;
      const Index next = idx[static_cast<std::size_t>(pos)] + 1;
      for (int k = pos; k < total; ++k) idx[static_cast<std::size_t>(k)] = next;
    }
  }
  return out;
}

namespace {

void require_parent(const TrendSpec& spec) {
  if (!spec.parent)
    throw Error(ErrorCode::ParentModelUnfitted, "model-mean trend has no fitted parent model");
}

MatrixXd polynomial_rows(const MatrixXd& x, int degree) {
  const auto terms = monomial_exponents(x.cols(), degree);
  MatrixXd f(x.rows(), static_cast<Index>(terms.size()));
  for (Index i = 0; i < x.rows(); ++i) {
    for (std::size_t t = 0; t < terms.size(); ++t) {
      double v = 1.0;
      for (Index j = 0; j < x.cols(); ++j)
        for (int p = 0; p < terms[t][static_cast<std::size_t>(j)]; ++p) v *= x(i, j);
      f(i, static_cast<Index>(t)) = v;
    }
  }
  return f;
}

}  // namespace

MatrixXd information_matrix(const TrendSpec& spec, const MatrixXd& x) {
  const Index n = x.rows();
  switch (spec.kind) {
    case TrendKind::Simple:
      return MatrixXd(n, 0);
    case TrendKind::Ordinary:
      return MatrixXd::Ones(n, 1);
    case TrendKind::Polynomial:
      if (spec.degree < 1) throw Error(ErrorCode::Config, "polynomial trend degree must be >= 1");
      return polynomial_rows(x, spec.degree);
    case TrendKind::CustomBasis: {
      if (spec.basis_functions.empty())
        throw Error(ErrorCode::Config, "custom-basis trend has no basis functions");
      MatrixXd f(n, static_cast<Index>(spec.basis_functions.size()));
      for (Index i = 0; i < n; ++i) {
        const VectorXd xi = x.row(i).transpose();
        for (std::size_t k = 0; k < spec.basis_functions.size(); ++k)
          f(i, static_cast<Index>(k)) = spec.basis_functions[k](xi);
      }
      return f;
    }
    case TrendKind::CustomF: {
      if (!spec.f_builder) throw Error(ErrorCode::Config, "custom trend has no F builder");
      MatrixXd f = spec.f_builder(x);
      if (f.rows() != n)
        throw Error(ErrorCode::CustomFShape, "custom trend returned " + std::to_string(f.rows()) +
                                                 " rows for " + std::to_string(n) + " points");
      return f;
    }
    case TrendKind::ModelMean: {
      require_parent(spec);
      if (x.cols() != spec.parent->dim())
        throw Error(ErrorCode::DimensionMismatch, "model-mean trend: dimension differs from parent");
      MatrixXd f(n, 1);
      f.col(0) = predict_mean(*spec.parent, x);
      return f;
    }
  }
  throw Error(ErrorCode::Config, "unknown trend kind");
}

VectorXd basis_vector(const TrendSpec& spec, const VectorXd& x) {
  const MatrixXd row = x.transpose();
  return information_matrix(spec, row).row(0).transpose();
}

}  // namespace krig
