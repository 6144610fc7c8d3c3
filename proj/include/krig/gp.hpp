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

#include <memory>
#include <optional>
#include <vector>

#include "krig/doe.hpp"
#include "krig/kernels.hpp"
#include "krig/numeric.hpp"
#include "krig/trends.hpp"

namespace krig {

enum class EstimationMethod { ML, CV };

struct Estimation {
  EstimationMethod method = EstimationMethod::CV;
  /// Number of folds; 0 means leave-one-out (K = N).
  Index folds = 0;
};

/// Objective functions return this (plus a bound-violation term) instead of
/// throwing when R cannot be factored or the variance estimate degenerates.
inline constexpr double kPenalty = 1e12;

/// Training data and model structure shared by every objective evaluation.
struct KrigingProblem {
  MatrixXd x;       // internal coordinates
  MatrixXd x_user;  // as given by the user
  VectorXd y;
  MatrixXd f;       // information matrix, N x P
  KernelSpec kernel;
  TrendSpec trend;
  ScalingRecord scaling;
  JitterPolicy jitter;
  /// Hyperparameter box used for the penalty's distance term; may be empty.
  VectorXd lower;
  VectorXd upper;

  Index size() const { return x.rows(); }
  Index dim() const { return x.cols(); }
  Index trend_size() const { return f.cols(); }
};

KrigingProblem make_problem(const KernelSpec& kernel, const TrendSpec& trend,
                            const MatrixXd& x_user, const VectorXd& y,
                            const ScalingRecord& scaling);

/// Immutable fitted state: everything prediction needs.
struct FittedKriging {
  KernelSpec kernel;
  TrendSpec trend;
  VectorXd theta;
  VectorXd beta;
  double sigma2 = 0.0;
  MatrixXd x_train;       // internal coordinates
  MatrixXd x_train_user;
  VectorXd y_train;
  MatrixXd f_train;
  CholeskyFactor<double> chol_r;
  VectorXd alpha;         // R^{-1} (y - offset - F beta)
  MatrixXd rinv_f;        // R^{-1} F
  MatrixXd linv_f;        // L^{-1} F
  CholeskyFactor<double> chol_ftrf;  // factor of F^T R^{-1} F
  ScalingRecord scaling;
  JitterPolicy jitter;
  Estimation estimation;
  /// Optimizer objective at theta: raw CV sum of squares or profiled NLL.
  double objective_value = 0.0;

  Index size() const { return x_train.rows(); }
  Index dim() const { return x_train.cols(); }
};

VectorXd profile_beta(const CholeskyFactor<double>& chol_r, const MatrixXd& f, const VectorXd& y);

double profile_sigma2_ml(const CholeskyFactor<double>& chol_r, const MatrixXd& f,
                         const VectorXd& y, const VectorXd& beta);

double penalty(const VectorXd& theta, const KrigingProblem& problem);

/// Profiled negative log-likelihood in theta.
double nll_profile(const VectorXd& theta, const KrigingProblem& problem);

using Folds = std::vector<std::vector<Index>>;

Folds cv_partition(Index n, Index k, RandomStream& stream);

/// Cross-validated means and unit-process-variance predictor variances.
struct CvPredictions {
  VectorXd means;
  VectorXd variances;
};

CvPredictions cv_predictions(const VectorXd& theta, const KrigingProblem& problem,
                             const Folds& folds);

double cv_objective(const VectorXd& theta, const KrigingProblem& problem, const Folds& folds);

struct LooResult {
  double objective = 0.0;
  VectorXd means;
  VectorXd variances;  // unit process variance
};

/// Leave-one-out from a single factorization of the bordered system.
LooResult loo_fast(const VectorXd& theta, const KrigingProblem& problem);

double cv_sigma2(const VectorXd& y, const CvPredictions& cv);
double cv_sigma2(const VectorXd& theta, const KrigingProblem& problem, const Folds& folds);

/// Factor R at theta and finalize beta and alpha. sigma2 is taken as given
/// when provided, otherwise the ML profile estimate is used.
FittedKriging assemble(const KrigingProblem& problem, const VectorXd& theta,
                       std::optional<double> sigma2 = std::nullopt);

enum class Want { Mean, MeanVariance, MeanCovariance };

struct Prediction {
  VectorXd mean;
  VectorXd variance;
  std::optional<MatrixXd> covariance;
  std::optional<VectorXd> lower;
  std::optional<VectorXd> upper;
};

/// Predict at query rows given in user coordinates. `alpha` requests
/// 1 - alpha confidence bounds.
Prediction predict(const FittedKriging& state, const MatrixXd& xq_user, Want want,
                   std::optional<double> alpha = std::nullopt);

VectorXd predict_mean(const FittedKriging& state, const MatrixXd& xq_user);

/// Prior trajectories, one per row: offset + F beta + sqrt(sigma2) L z.
MatrixXd sample_prior(const KernelSpec& kernel, const VectorXd& theta, double sigma2,
                      const TrendSpec& trend, const VectorXd& beta, const MatrixXd& xgrid,
                      Index n_paths, RandomStream& stream);

/// Joint draws from the posterior predictive distribution on a grid.
MatrixXd sample_posterior(const FittedKriging& state, const MatrixXd& xgrid_user, Index n_paths,
                          RandomStream& stream);

}  // namespace krig
