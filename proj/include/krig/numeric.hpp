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
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "krig/error.hpp"

namespace krig {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

/// Lower Cholesky factor of A + jitter_applied * I.
template <typename Scalar = double>
struct CholeskyFactor {
  Matrix<Scalar> lower;
  Scalar jitter_applied = 0;
  Scalar log_det = 0;

  Index size() const { return lower.rows(); }
};

struct JitterPolicy {
  double base = 1e-10;
  double max = 1e-6;
};

namespace detail {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

template <typename Scalar>
bool try_factor(const Matrix<Scalar>& a, Scalar jitter, CholeskyFactor<Scalar>& out) {
  Matrix<Scalar> shifted = a;
  shifted.diagonal().array() += jitter;
  Eigen::LLT<Matrix<Scalar>> llt(shifted);
  if (llt.info() != Eigen::Success) return false;
  Matrix<Scalar> lower = llt.matrixL();
  const auto diag = lower.diagonal();
  if (!diag.allFinite() || (diag.array() <= Scalar(0)).any()) return false;
  out.log_det = Scalar(2) * diag.array().log().sum();
  out.lower = std::move(lower);
  out.jitter_applied = jitter;
  return true;
}

}  // namespace detail

/// Factor a symmetric matrix, escalating a diagonal jitter by x10 from
/// base_jitter up to max_jitter until the factorization succeeds.
template <typename Derived>
CholeskyFactor<typename Derived::Scalar> cholesky_with_jitter(
    const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar base_jitter = 1e-10,
    typename Derived::Scalar max_jitter = 1e-6) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols())
    throw Error(ErrorCode::DimensionMismatch, "cholesky: matrix is not square");
  if (!detail::all_finite(a))
    throw Error(ErrorCode::NonFinite, "cholesky: matrix has non-finite entries");
  if (base_jitter < 0)
    throw Error(ErrorCode::DomainError, "cholesky: negative base jitter");
  const Matrix<Scalar> m = a;
  const Scalar scale = m.size() > 0 ? m.cwiseAbs().maxCoeff() : Scalar(0);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * std::max(scale, Scalar(1)))
    throw Error(ErrorCode::DomainError, "cholesky: matrix is not symmetric");

  CholeskyFactor<Scalar> out;
  if (detail::try_factor<Scalar>(m, Scalar(0), out)) return out;
  if (base_jitter > 0) {
    const Scalar limit = max_jitter * (Scalar(1) + Scalar(1e-9));
    for (Scalar jitter = base_jitter; jitter <= limit; jitter *= Scalar(10)) {
      if (detail::try_factor<Scalar>(m, jitter, out)) return out;
    }
  }
  throw Error(ErrorCode::NotPositiveDefinite,
              "cholesky: matrix is not positive definite even with jitter " +
                  std::to_string(static_cast<double>(max_jitter)));
}

template <typename Derived>
CholeskyFactor<typename Derived::Scalar> cholesky_with_jitter(
    const Eigen::MatrixBase<Derived>& a, const JitterPolicy& policy) {
  return cholesky_with_jitter(a, typename Derived::Scalar(policy.base),
                              typename Derived::Scalar(policy.max));
}

/// L^{-1} B by forward substitution.
template <typename Scalar, typename Derived>
Matrix<Scalar> solve_lower(const CholeskyFactor<Scalar>& factor,
                           const Eigen::MatrixBase<Derived>& b) {
  if (b.rows() != factor.size())
    throw Error(ErrorCode::DimensionMismatch, "solve_lower: row count mismatch");
  return factor.lower.template triangularView<Eigen::Lower>().solve(b);
}

/// (L L^T)^{-1} B without forming an inverse.
template <typename Scalar, typename Derived>
Matrix<Scalar> solve_spd(const CholeskyFactor<Scalar>& factor,
                         const Eigen::MatrixBase<Derived>& b) {
  Matrix<Scalar> x = solve_lower(factor, b);
  factor.lower.transpose().template triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

double std_normal_cdf(double z);

/// Inverse of the standard normal CDF. Throws DomainError outside (0, 1).
double std_normal_quantile(double p);

/// Seeded, platform-reproducible source of uniform and normal variates.
///
/// Not thread-safe; derive independent child streams with child().
class RandomStream {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit RandomStream(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }
  std::string algorithm_id() const { return kAlgorithm; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Independent stream whose seed is a hash of (seed, key).
  RandomStream child(std::uint64_t key) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

VectorXd standard_normal_draws(RandomStream& stream, Index n);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace krig
