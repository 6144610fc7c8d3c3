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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <memory>

#include "krig/gp.hpp"
#include "krig/trends.hpp"

using namespace krig;

namespace {

long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::shared_ptr<const FittedKriging> parent_on(const MatrixXd& x, const VectorXd& y) {
  KernelSpec k;
  k.family.kind = Family::Gaussian;
  k.dim = x.cols();
  const auto p = make_problem(k, TrendSpec::ordinary(), x, y, ScalingRecord::identity(x.cols()));
  return std::make_shared<const FittedKriging>(assemble(p, VectorXd::Constant(x.cols(), 0.3)));
}

}  // namespace

TEST_CASE("basis vectors") {
  CHECK(basis_vector(TrendSpec::ordinary(), Eigen::Vector2d(7, 8)) == VectorXd::Ones(1));
  CHECK(basis_vector(TrendSpec::simple(3.0), Eigen::Vector2d(7, 8)).size() == 0);
  CHECK(basis_vector(TrendSpec::polynomial(1), Eigen::Vector2d(3, 5)) ==
        (VectorXd(3) << 1, 3, 5).finished());
  CHECK(basis_vector(TrendSpec::polynomial(2), Eigen::Vector2d(1, 2)) ==
        (VectorXd(6) << 1, 1, 2, 1, 2, 4).finished());
}

TEST_CASE("graded-lex monomial order") {
  const auto e = monomial_exponents(2, 2);
  const std::vector<std::vector<int>> want{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(e == want);
}

TEST_CASE("information matrices") {
  CHECK(information_matrix(TrendSpec::ordinary(), MatrixXd::Random(4, 3)) == MatrixXd::Ones(4, 1));
  const MatrixXd s = information_matrix(TrendSpec::simple(1.0), MatrixXd::Random(4, 3));
  CHECK(s.rows() == 4);
  CHECK(s.cols() == 0);
}

TEST_CASE("property: polynomial basis size is C(M+d, d)") {
  for (Index m = 1; m <= 3; ++m)
    for (int d = 1; d <= 3; ++d) {
      const auto e = monomial_exponents(m, d);
      CHECK(static_cast<long>(e.size()) == binomial(m + d, d));
      // Explicit enumeration: every exponent tuple with total <= d appears once.
      long count = 0;
      std::vector<int> t(static_cast<std::size_t>(m), 0);
      std::function<void(Index, int)> walk = [&](Index j, int left) {
        if (j == m) {
          ++count;
          CHECK(std::count(e.begin(), e.end(), t) == 1);
          return;
        }
        for (int p = 0; p <= left; ++p) {
          t[static_cast<std::size_t>(j)] = p;
          walk(j + 1, left - p);
        }
      };
      walk(0, d);
      CHECK(count == static_cast<long>(e.size()));
    }
}

TEST_CASE("property: stacked basis vectors equal the information matrix") {
  std::srand(8);
  for (const TrendSpec& t : {TrendSpec::ordinary(), TrendSpec::polynomial(1), TrendSpec::polynomial(2),
                             TrendSpec::polynomial(3)}) {
    const MatrixXd x = MatrixXd::Random(7, 3);
    const MatrixXd f = information_matrix(t, x);
    for (Index i = 0; i < x.rows(); ++i) CHECK(f.row(i).transpose() == basis_vector(t, x.row(i).transpose()));
  }
}

TEST_CASE("custom trends") {
  TrendSpec b;
  b.kind = TrendKind::CustomBasis;
  b.basis_functions = {[](const VectorXd&) { return 1.0; }, [](const VectorXd& x) { return x(0) * x(1); }};
  CHECK(basis_vector(b, Eigen::Vector2d(2, 3)) == Eigen::Vector2d(1, 6));

  TrendSpec f;
  f.kind = TrendKind::CustomF;
  f.f_builder = [](const MatrixXd& x) { return MatrixXd::Ones(x.rows() + 1, 1); };
  try {
    information_matrix(f, MatrixXd::Zero(3, 1));
    FAIL("expected CustomFShape");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CustomFShape);
  }
  CHECK(f.uses_user_coordinates());
  CHECK(!TrendSpec::polynomial(2).uses_user_coordinates());
}

TEST_CASE("polynomial degree must be positive") { CHECK_THROWS_AS(TrendSpec::polynomial(0), Error); }

TEST_CASE("model-mean trend") {
  TrendSpec orphan;
  orphan.kind = TrendKind::ModelMean;
  try {
    information_matrix(orphan, MatrixXd::Zero(2, 1));
    FAIL("expected ParentModelUnfitted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParentModelUnfitted);
  }

  MatrixXd x(5, 1);
  x << 0.0, 0.2, 0.45, 0.7, 1.0;
  const VectorXd y = (x.array() * 6).sin().matrix();
  const auto parent = parent_on(x, y);
  const TrendSpec t = TrendSpec::model_mean(parent);
  const MatrixXd f = information_matrix(t, x);
  CHECK(f.cols() == 1);
  CHECK((f.col(0) - y).cwiseAbs().maxCoeff() <= 1e-8 * y.cwiseAbs().maxCoeff());

  const MatrixXd xq = MatrixXd::Random(9, 1);
  CHECK(information_matrix(t, xq).col(0) == predict_mean(*parent, xq));
  CHECK(t.reported_degree() == -1);
}
