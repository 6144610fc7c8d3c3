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

#include "krig/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace krig {

namespace {

bool is_recoverable(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::RankDeficient:
    case ErrorCode::NonFinite:
    case ErrorCode::NumericalBreakdown:
    case ErrorCode::DivisionByZero:
      return true;
    default:
      return false;
  }
}

VectorXd centered(const KrigingProblem& problem) {
  return problem.y.array() - problem.trend.offset();
}

CholeskyFactor<double> factor_gls_matrix(const MatrixXd& linv_f) {
  const auto fail = [] {
    return Error(ErrorCode::RankDeficient,
                 "F^T R^-1 F is singular: the trend basis is rank deficient on this design");
  };
  // A Cholesky of the Gram matrix can succeed on roundoff alone, so check the
  // rank of the whitened basis first.
  Eigen::ColPivHouseholderQR<MatrixXd> qr(linv_f);
  qr.setThreshold(1e-12);
  if (linv_f.rows() < linv_f.cols() || qr.rank() < linv_f.cols()) throw fail();
  const MatrixXd a = linv_f.transpose() * linv_f;
  try {
    return cholesky_with_jitter(a, 0.0, 0.0);
  } catch (const Error&) {
    throw fail();
  }
}

// Two steps of iterative refinement with the residual accumulated in long
// double. R is close to singular when the optimizer pushes length scales up,
// and the residual of this solve is exactly the interpolation error.
VectorXd refined_solve(const MatrixXd& r, const CholeskyFactor<double>& chol, const VectorXd& b) {
  VectorXd x = solve_spd(chol, b);
  const Index n = r.rows();
  for (int step = 0; step < 2; ++step) {
    VectorXd d(n);
    for (Index i = 0; i < n; ++i) {
      long double acc = b(i) - static_cast<long double>(chol.jitter_applied) * x(i);
      for (Index j = 0; j < n; ++j) acc -= static_cast<long double>(r(i, j)) * x(j);
      d(i) = static_cast<double>(acc);
    }
    x += solve_spd(chol, d);
  }
  return x;
}

MatrixXd rows_of(const MatrixXd& m, const std::vector<Index>& idx) {
  MatrixXd out(static_cast<Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = m.row(idx[i]);
  return out;
}

MatrixXd block_of(const MatrixXd& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
  return out;
}

VectorXd entries_of(const VectorXd& v, const std::vector<Index>& idx) {
  VectorXd out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
  return out;
}

}  // namespace

KrigingProblem make_problem(const KernelSpec& kernel, const TrendSpec& trend,
                            const MatrixXd& x_user, const VectorXd& y,
                            const ScalingRecord& scaling) {
  if (x_user.rows() < 1) throw Error(ErrorCode::Data, "experimental design is empty");
  if (x_user.rows() != y.size())
    throw Error(ErrorCode::DimensionMismatch,
                "X has " + std::to_string(x_user.rows()) + " rows but Y has " +
                    std::to_string(y.size()));
  if (x_user.cols() != kernel.dim)
    throw Error(ErrorCode::DimensionMismatch,
                "X has " + std::to_string(x_user.cols()) + " columns, kernel expects " +
                    std::to_string(kernel.dim));
  if (!x_user.allFinite() || !y.allFinite())
    throw Error(ErrorCode::Data, "experimental design contains non-finite values");

  KrigingProblem p;
  p.x_user = x_user;
  p.x = apply_scaling(scaling, x_user);
  p.y = y;
  p.kernel = kernel;
  p.trend = trend;
  p.scaling = scaling;
  p.f = information_matrix(trend, trend.uses_user_coordinates() ? p.x_user : p.x);
  return p;
}

VectorXd profile_beta(const CholeskyFactor<double>& chol_r, const MatrixXd& f, const VectorXd& y) {
  if (f.rows() != y.size() || f.rows() != chol_r.size())
    throw Error(ErrorCode::DimensionMismatch, "profile_beta: dimension mismatch");
  if (f.cols() == 0) return VectorXd(0);
  const MatrixXd g = solve_lower(chol_r, f);
  const VectorXd w = solve_lower(chol_r, y);
  const auto a = factor_gls_matrix(g);
  return solve_spd(a, g.transpose() * w);
}

double profile_sigma2_ml(const CholeskyFactor<double>& chol_r, const MatrixXd& f,
                         const VectorXd& y, const VectorXd& beta) {
  VectorXd resid = y;
  if (f.cols() > 0) resid -= f * beta;
  const VectorXd w = solve_lower(chol_r, resid);
  return w.squaredNorm() / static_cast<double>(y.size());
}

double penalty(const VectorXd& theta, const KrigingProblem& problem) {
  double dist = 0.0;
  if (problem.lower.size() == theta.size() && problem.upper.size() == theta.size()) {
    for (Index i = 0; i < theta.size(); ++i) {
      dist += std::max(0.0, problem.lower(i) - theta(i));
      dist += std::max(0.0, theta(i) - problem.upper(i));
    }
  }
  return kPenalty + dist;
}

double nll_profile(const VectorXd& theta, const KrigingProblem& problem) {
  try {
    const MatrixXd r = build_corr_matrix(problem.kernel, problem.x, theta);
    const auto chol = cholesky_with_jitter(r, problem.jitter);
    const VectorXd yc = centered(problem);
    const VectorXd beta = profile_beta(chol, problem.f, yc);
    const double sigma2 = profile_sigma2_ml(chol, problem.f, yc, beta);
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) return penalty(theta, problem);
    const double n = static_cast<double>(problem.size());
    const double value = 0.5 * chol.log_det +
                         0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) + 0.5 * n;
    return std::isfinite(value) ? value : penalty(theta, problem);
  } catch (const Error& e) {
    if (is_recoverable(e)) return penalty(theta, problem);
    throw;
  }
}

Folds cv_partition(Index n, Index k, RandomStream& stream) {
  if (k < 2 || k > n)
    throw Error(ErrorCode::DomainError, "cv_partition: need 2 <= K <= N, got K = " +
                                            std::to_string(k) + ", N = " + std::to_string(n));
  Folds folds(static_cast<std::size_t>(k));
  if (k == n) {
    for (Index i = 0; i < n; ++i) folds[static_cast<std::size_t>(i)] = {i};
    return folds;
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(stream.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  for (Index i = 0; i < n; ++i)
    folds[static_cast<std::size_t>(i % k)].push_back(perm[static_cast<std::size_t>(i)]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvPredictions cv_predictions(const VectorXd& theta, const KrigingProblem& problem,
                             const Folds& folds) {
  const Index n = problem.size();
  const MatrixXd r = build_corr_matrix(problem.kernel, problem.x, theta);
  const VectorXd prior = prior_self_correlation(problem.kernel, problem.x, theta);
  const VectorXd yc = centered(problem);

  CvPredictions out{VectorXd::Constant(n, std::nan("")), VectorXd::Constant(n, std::nan(""))};
  std::vector<char> held(static_cast<std::size_t>(n));
  for (const auto& fold : folds) {
    std::fill(held.begin(), held.end(), 0);
    for (Index i : fold) held[static_cast<std::size_t>(i)] = 1;
    std::vector<Index> train;
    for (Index i = 0; i < n; ++i)
      if (!held[static_cast<std::size_t>(i)]) train.push_back(i);
    if (train.empty()) throw Error(ErrorCode::DomainError, "cv fold leaves no training data");

    const auto chol = cholesky_with_jitter(block_of(r, train, train), problem.jitter);
    const MatrixXd f_t = rows_of(problem.f, train);
    const VectorXd y_t = entries_of(yc, train);
    const VectorXd beta = profile_beta(chol, f_t, y_t);
    VectorXd resid = y_t;
    if (f_t.cols() > 0) resid -= f_t * beta;
    const VectorXd alpha = solve_spd(chol, resid);

    const MatrixXd r_cross = block_of(r, train, fold);
    const MatrixXd lr = solve_lower(chol, r_cross);
    MatrixXd w;
    if (f_t.cols() > 0) {
      const MatrixXd g = solve_lower(chol, f_t);
      const auto a = factor_gls_matrix(g);
      const MatrixXd u = g.transpose() * lr - rows_of(problem.f, fold).transpose();
      w = solve_lower(a, u);
    }
    for (std::size_t q = 0; q < fold.size(); ++q) {
      const Index i = fold[q];
      const auto col = static_cast<Index>(q);
      double mean = problem.trend.offset() + r_cross.col(col).dot(alpha);
      if (f_t.cols() > 0) mean += problem.f.row(i).dot(beta);
      double var = prior(i) - lr.col(col).squaredNorm();
      if (w.size() > 0) var += w.col(col).squaredNorm();
      out.means(i) = mean;
      out.variances(i) = var;
    }
  }
  return out;
}

double cv_objective(const VectorXd& theta, const KrigingProblem& problem, const Folds& folds) {
  try {
    const auto cv = cv_predictions(theta, problem, folds);
    const double value = (problem.y - cv.means).squaredNorm();
    return std::isfinite(value) ? value : penalty(theta, problem);
  } catch (const Error& e) {
    if (is_recoverable(e)) return penalty(theta, problem);
    throw;
  }
}

namespace {

LooResult loo_core(const VectorXd& theta, const KrigingProblem& problem) {
  const Index n = problem.size();
  const MatrixXd r = build_corr_matrix(problem.kernel, problem.x, theta);
  const auto chol = cholesky_with_jitter(r, problem.jitter);
  const VectorXd prior = prior_self_correlation(problem.kernel, problem.x, theta);

  // Q is the leading N x N block of the inverse of the bordered matrix
  // [[R, F], [F^T, 0]].
  MatrixXd q = solve_spd(chol, MatrixXd::Identity(n, n));
  if (problem.trend_size() > 0) {
    const MatrixXd g = q * problem.f;
    const auto a = factor_gls_matrix(solve_lower(chol, problem.f));
    const MatrixXd h = solve_lower(a, g.transpose());
    q.noalias() -= h.transpose() * h;
  }
  const VectorXd qy = q * centered(problem);

  LooResult out;
  out.means.resize(n);
  out.variances.resize(n);
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double qii = q(i, i);
    if (!(qii > 0.0))
      throw Error(ErrorCode::DivisionByZero, "leave-one-out: non-positive diagonal in bordered inverse");
    const double e = qy(i) / qii;
    out.means(i) = problem.y(i) - e;
    out.variances(i) = 1.0 / qii - (r(i, i) + chol.jitter_applied - prior(i));
    sum += e * e;
  }
  out.objective = sum;
  return out;
}

}  // namespace

LooResult loo_fast(const VectorXd& theta, const KrigingProblem& problem) {
  try {
    LooResult out = loo_core(theta, problem);
    if (!std::isfinite(out.objective)) out.objective = penalty(theta, problem);
    return out;
  } catch (const Error& e) {
    if (!is_recoverable(e)) throw;
    LooResult out;
    out.objective = penalty(theta, problem);
    return out;
  }
}

double cv_sigma2(const VectorXd& y, const CvPredictions& cv) {
  if (y.size() != cv.means.size() || y.size() != cv.variances.size())
    throw Error(ErrorCode::DimensionMismatch, "cv_sigma2: size mismatch");
  double sum = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    if (!(cv.variances(i) > 0.0))
      throw Error(ErrorCode::DivisionByZero,
                  "cv_sigma2: cross-validated variance at point " + std::to_string(i + 1) + " is zero");
    const double e = y(i) - cv.means(i);
    sum += e * e / cv.variances(i);
  }
  return sum / static_cast<double>(y.size());
}

double cv_sigma2(const VectorXd& theta, const KrigingProblem& problem, const Folds& folds) {
  if (static_cast<Index>(folds.size()) == problem.size()) {
    const auto loo = loo_core(theta, problem);
    return cv_sigma2(problem.y, CvPredictions{loo.means, loo.variances});
  }
  return cv_sigma2(problem.y, cv_predictions(theta, problem, folds));
}

FittedKriging assemble(const KrigingProblem& problem, const VectorXd& theta,
                       std::optional<double> sigma2) {
  FittedKriging s;
  s.kernel = problem.kernel;
  s.trend = problem.trend;
  s.theta = theta;
  s.x_train = problem.x;
  s.x_train_user = problem.x_user;
  s.y_train = problem.y;
  s.f_train = problem.f;
  s.scaling = problem.scaling;
  s.jitter = problem.jitter;

  const MatrixXd r = build_corr_matrix(problem.kernel, problem.x, theta);
  s.chol_r = cholesky_with_jitter(r, problem.jitter);
  const VectorXd yc = centered(problem);
  VectorXd resid = yc;
  if (problem.trend_size() > 0) {
    s.linv_f = solve_lower(s.chol_r, problem.f);
    s.chol_ftrf = factor_gls_matrix(s.linv_f);
    s.beta = solve_spd(s.chol_ftrf, s.linv_f.transpose() * solve_lower(s.chol_r, yc));
    s.rinv_f = solve_spd(s.chol_r, problem.f);
    resid -= problem.f * s.beta;
  } else {
    s.beta = VectorXd(0);
    s.linv_f = MatrixXd(problem.size(), 0);
    s.rinv_f = MatrixXd(problem.size(), 0);
  }
  s.alpha = refined_solve(r, s.chol_r, resid);
  s.sigma2 = sigma2 ? *sigma2
                    : solve_lower(s.chol_r, resid).squaredNorm() / static_cast<double>(problem.size());
  return s;
}

Prediction predict(const FittedKriging& state, const MatrixXd& xq_user, Want want,
                   std::optional<double> alpha) {
  const Index nq = xq_user.rows();
  if (nq > 0 && xq_user.cols() != state.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "query points have " + std::to_string(xq_user.cols()) + " columns, model expects " +
                    std::to_string(state.dim()));
  Prediction out;
  out.mean.resize(nq);
  if (nq == 0) {
    out.variance.resize(0);
    if (want == Want::MeanCovariance) out.covariance = MatrixXd(0, 0);
    if (alpha) {
      out.lower = VectorXd(0);
      out.upper = VectorXd(0);
    }
    return out;
  }

  const MatrixXd xq = apply_scaling(state.scaling, xq_user);
  const MatrixXd r = build_cross_corr(state.kernel, state.x_train, xq, state.theta);
  const Index p = state.beta.size();
  MatrixXd fq;
  if (p > 0) fq = information_matrix(state.trend, state.trend.uses_user_coordinates() ? xq_user : xq);
  for (Index q = 0; q < nq; ++q) {
    double m = state.trend.offset() + r.col(q).dot(state.alpha);
    if (p > 0) m += fq.row(q).dot(state.beta);
    out.mean(q) = m;
  }

  const bool need_var = want != Want::Mean || alpha.has_value();
  if (!need_var) return out;

  const MatrixXd lr = solve_lower(state.chol_r, r);
  MatrixXd w;
  if (p > 0) w = solve_lower(state.chol_ftrf, state.linv_f.transpose() * lr - fq.transpose());

  VectorXd v(nq);
  if (want == Want::MeanCovariance) {
    MatrixXd c = build_query_corr(state.kernel, xq, state.theta);
    c.noalias() -= lr.transpose() * lr;
    if (p > 0) c.noalias() += w.transpose() * w;
    c = (0.5 * (c + c.transpose())).eval();
    v = c.diagonal();
    out.covariance = std::move(c);
  } else {
    const VectorXd prior = prior_self_correlation(state.kernel, xq, state.theta);
    for (Index q = 0; q < nq; ++q) {
      v(q) = prior(q) - lr.col(q).squaredNorm();
      if (p > 0) v(q) += w.col(q).squaredNorm();
    }
  }
  for (Index q = 0; q < nq; ++q) {
    if (v(q) < -1e-10)
      throw Error(ErrorCode::NumericalBreakdown,
                  "predictor variance is negative (" + std::to_string(v(q)) + " sigma^2) at query " +
                      std::to_string(q + 1));
    v(q) = std::max(v(q), 0.0);
  }
  out.variance = state.sigma2 * v;
  if (out.covariance) {
    *out.covariance *= state.sigma2;
    out.covariance->diagonal() = out.variance;
  }
  if (alpha) {
    const double z = std_normal_quantile(1.0 - *alpha / 2.0);
    const VectorXd sd = out.variance.cwiseSqrt();
    out.lower = out.mean - z * sd;
    out.upper = out.mean + z * sd;
  }
  return out;
}

VectorXd predict_mean(const FittedKriging& state, const MatrixXd& xq_user) {
  return predict(state, xq_user, Want::Mean).mean;
}

MatrixXd sample_prior(const KernelSpec& kernel, const VectorXd& theta, double sigma2,
                      const TrendSpec& trend, const VectorXd& beta, const MatrixXd& xgrid,
                      Index n_paths, RandomStream& stream) {
  if (sigma2 < 0.0) throw Error(ErrorCode::DomainError, "sample_prior: negative variance");
  const Index ng = xgrid.rows();
  const MatrixXd r = build_query_corr(kernel, xgrid, theta);
  const auto chol = cholesky_with_jitter(r, JitterPolicy{});
  const MatrixXd f = information_matrix(trend, xgrid);
  if (f.cols() != beta.size())
    throw Error(ErrorCode::DimensionMismatch, "sample_prior: beta length differs from trend size");
  VectorXd mean = VectorXd::Constant(ng, trend.offset());
  if (f.cols() > 0) mean += f * beta;

  const double sd = std::sqrt(sigma2);
  MatrixXd paths(n_paths, ng);
  for (Index k = 0; k < n_paths; ++k) {
    const VectorXd z = standard_normal_draws(stream, ng);
    paths.row(k) = (mean + sd * (chol.lower * z)).transpose();
  }
  return paths;
}

MatrixXd sample_posterior(const FittedKriging& state, const MatrixXd& xgrid_user, Index n_paths,
                          RandomStream& stream) {
  const Index ng = xgrid_user.rows();
  const Prediction pred = predict(state, xgrid_user, Want::MeanCovariance);
  // The posterior covariance is singular at training points; a clamped
  // eigen-square-root keeps those directions exactly degenerate.
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(*pred.covariance);
  if (eig.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalBreakdown, "sample_posterior: eigen-decomposition failed");
  const VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const MatrixXd a = eig.eigenvectors() * root.asDiagonal();

  MatrixXd paths(n_paths, ng);
  for (Index k = 0; k < n_paths; ++k) {
    const VectorXd z = standard_normal_draws(stream, ng);
    paths.row(k) = (pred.mean + a * z).transpose();
  }
  return paths;
}

}  // namespace krig
