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

#include "krig/numeric.hpp"

#include <array>
#include <limits>

namespace krig {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ThetaLengthMismatch: return "ThetaLengthMismatch";
    case ErrorCode::CustomKernelShape: return "CustomKernelShapeError";
    case ErrorCode::CustomFShape: return "CustomFShapeError";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::ParentModelUnfitted: return "ParentModelUnfitted";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Data: return "DataError";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::ThetaLengthMismatch:
    case ErrorCode::ParentModelUnfitted:
      return ErrorCategory::Config;
    case ErrorCode::Data:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::ZeroVariance:
    case ErrorCode::DuplicatePoints:
    case ErrorCode::CustomFShape:
      return ErrorCategory::Data;
    default:
      return ErrorCategory::Numerical;
  }
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorCode::DomainError, "std_normal_quantile: p must lie in (0, 1)");

  // Acklam's rational approximation, relative error below 1.2e-9.
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against erfc. In the upper tail work with 1 - p to keep
  // the residual from cancelling.
  constexpr double sqrt_2pi = 2.50662827463100050242;
  double e;
  if (p > 0.5)
    e = (1.0 - p) - 0.5 * std::erfc(x / std::sqrt(2.0));
  else
    e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * sqrt_2pi * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return std_normal_quantile(uniform_open()); }

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::DomainError, "RandomStream::below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

RandomStream RandomStream::child(std::uint64_t key) const {
  return RandomStream(splitmix64(seed_ ^ splitmix64(key + 0x632be59bd9b4e019ULL)));
}

VectorXd standard_normal_draws(RandomStream& stream, Index n) {
  VectorXd z(n);
  for (Index i = 0; i < n; ++i) z(i) = stream.normal();
  return z;
}

}  // namespace krig
