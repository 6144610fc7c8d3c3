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

// Brute-force reference implementations used by the tests. Everything here
// works from the textbook formulas with explicit inverses in long double,
// sharing no code with the engine beyond building R.

#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "krig/gp.hpp"
#include "krig/kernels.hpp"

namespace oracle {

using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using krig::Index;
using krig::MatrixXd;
using krig::VectorXd;

inline LMat ld(const MatrixXd& m) { return m.cast<long double>(); }
inline LVec ld(const VectorXd& v) { return v.cast<long double>(); }

inline LMat inverse(const LMat& a) { return a.fullPivLu().inverse(); }

/// 1-D correlation families written out directly.
inline long double family(krig::Family f, long double h, long double theta) {
  const long double t = h / theta;
  switch (f) {
    case krig::Family::Linear: return t < 1 ? 1 - t : 0;
    case krig::Family::Exponential: return std::exp(-t);
    case krig::Family::Matern32: return (1 + std::sqrt(3.0L) * t) * std::exp(-std::sqrt(3.0L) * t);
    case krig::Family::Matern52:
      return (1 + std::sqrt(5.0L) * t + 5.0L * t * t / 3) * std::exp(-std::sqrt(5.0L) * t);
    case krig::Family::Gaussian: return std::exp(-t * t);
    default: return NAN;
  }
}

/// Generalized least squares and the ML variance from explicit inverses.
struct DenseFit {
  LMat rinv;
  LMat f;
  LVec resid;
  LVec beta;
  LMat ftrf_inv;
  long double sigma2 = 0;
  long double offset = 0;
};

inline DenseFit dense_fit(const MatrixXd& r, const MatrixXd& f, const VectorXd& y, double offset = 0) {
  DenseFit d;
  d.rinv = inverse(ld(r));
  d.f = ld(f);
  d.offset = offset;
  LVec yc = ld(y).array() - static_cast<long double>(offset);
  if (f.cols() > 0) {
    d.ftrf_inv = inverse(d.f.transpose() * d.rinv * d.f);
    d.beta = d.ftrf_inv * d.f.transpose() * d.rinv * yc;
    d.resid = yc - d.f * d.beta;
  } else {
    d.beta = LVec(0);
    d.resid = yc;
  }
  d.sigma2 = d.resid.dot(d.rinv * d.resid) / static_cast<long double>(y.size());
  return d;
}

struct DensePoint {
  long double mean = 0;
  long double unit_variance = 0;
};

/// mu = f^T beta + r^T R^-1 (y - F beta); var/sigma^2 = 1 - r^T R^-1 r + u^T (F^T R^-1 F)^-1 u.
inline DensePoint dense_predict(const DenseFit& d, const VectorXd& r, const VectorXd& fq,
                                long double prior = 1) {
  const LVec rl = ld(r);
  DensePoint p;
  p.mean = d.offset + rl.dot(d.rinv * d.resid);
  p.unit_variance = prior - rl.dot(d.rinv * rl);
  if (d.f.cols() > 0) {
    const LVec fl = ld(fq);
    p.mean += fl.dot(d.beta);
    const LVec u = d.f.transpose() * d.rinv * rl - fl;
    p.unit_variance += u.dot(d.ftrf_inv * u);
  }
  return p;
}

/// Negative log-likelihood of y ~ N(F beta, sigma2 R).
inline long double neg_log_likelihood(const MatrixXd& r, const MatrixXd& f, const VectorXd& y,
                                      const LVec& beta, long double sigma2) {
  const LMat rl = ld(r);
  LVec resid = ld(y);
  if (f.cols() > 0) resid -= ld(f) * beta;
  const long double n = static_cast<long double>(y.size());
  const long double logdet = std::log(rl.fullPivLu().determinant());
  return 0.5L * n * std::log(2 * 3.14159265358979323846264338327950288L * sigma2) + 0.5L * logdet +
         resid.dot(inverse(rl) * resid) / (2 * sigma2);
}

/// Change in -log L when beta moves by delta (sigma2 fixed), expanded so no
/// two large likelihood values are subtracted:
/// (delta' F' R^-1 F delta - 2 delta' F' R^-1 (y - F beta)) / (2 sigma2).
inline long double nll_change_beta(const MatrixXd& r, const MatrixXd& f, const VectorXd& y, const LVec& beta,
                                   const LVec& delta, long double sigma2) {
  const LMat ri = inverse(ld(r));
  const LVec fd = ld(f) * delta;
  const LVec resid = ld(y) - ld(f) * beta;
  return (fd.dot(ri * fd) - 2 * fd.dot(ri * resid)) / (2 * sigma2);
}

/// Change in -log L when sigma2 is scaled by factor (beta fixed).
inline long double nll_change_sigma2(const MatrixXd& r, const MatrixXd& f, const VectorXd& y, const LVec& beta,
                                     long double sigma2, long double factor) {
  const LVec resid = ld(y) - ld(f) * beta;
  const long double q = resid.dot(inverse(ld(r)) * resid);
  const long double n = static_cast<long double>(y.size());
  return 0.5L * n * std::log(factor) + q / (2 * sigma2) * (1 / factor - 1);
}

struct NaiveLoo {
  long double objective = 0;
  std::vector<long double> means;
  std::vector<long double> variances;  // unit process variance
};

/// Leave-one-out by literally refitting without each point in turn.
inline NaiveLoo naive_loo(const krig::KrigingProblem& p, const VectorXd& theta) {
  const Index n = p.size();
  const MatrixXd r = krig::build_corr_matrix(p.kernel, p.x, theta);
  NaiveLoo out;
  for (Index i = 0; i < n; ++i) {
    std::vector<Index> keep;
    for (Index j = 0; j < n; ++j)
      if (j != i) keep.push_back(j);
    const Index m = n - 1;
    MatrixXd rk(m, m), fk(m, p.f.cols());
    VectorXd yk(m), ri(m);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) rk(a, b) = r(keep[a], keep[b]);
      fk.row(a) = p.f.row(keep[a]);
      yk(a) = p.y(keep[a]);
      ri(a) = r(keep[a], i);
    }
    const DenseFit d = dense_fit(rk, fk, yk, p.trend.offset());
    const DensePoint q = dense_predict(d, ri, p.f.row(i).transpose(), 1.0L);
    out.means.push_back(q.mean);
    out.variances.push_back(q.unit_variance);
    out.objective += (p.y(i) - q.mean) * (p.y(i) - q.mean);
  }
  return out;
}

/// erf from its Maclaurin series for moderate arguments, erfc beyond.
inline long double normal_cdf(long double z) {
  const long double x = z / std::sqrt(2.0L);
  if (std::fabs(x) < 3) {
    long double term = x, sum = x;
    for (int n = 1; n < 200; ++n) {
      term *= -x * x / n;
      sum += term / (2 * n + 1);
    }
    return 0.5L + sum / std::sqrt(3.14159265358979323846264338327950288L);
  }
  return 0.5L * std::erfc(-x);
}

/// Bisection on normal_cdf; upper-tail probabilities are mapped through
/// symmetry so that 1 - p keeps its relative precision.
inline long double normal_quantile(long double p) {
  if (p > 0.5L) return -normal_quantile(1.0L - p);
  long double lo = -40, hi = 40;
  for (int k = 0; k < 200; ++k) {
    const long double mid = 0.5L * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5L * (lo + hi);
}

/// |a - b| / max(|b|, floor).
inline double rel_err(long double a, long double b, long double floor = 1e-300L) {
  return static_cast<double>(std::fabs(a - b) / std::max(std::fabs(b), floor));
}

}  // namespace oracle
