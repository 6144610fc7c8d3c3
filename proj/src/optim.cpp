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

#include "krig/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

namespace krig {

std::string_view stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::GradientTol: return "gradient-tol";
    case StopReason::StepTol: return "step-tol";
    case StopReason::MaxIter: return "max-iter";
    case StopReason::GenerationStall: return "generation-stall";
  }
  return "unknown";
}

void OptimProblem::validate() const {
  if (!objective) throw Error(ErrorCode::Config, "optimization problem has no objective");
  if (lower.size() != upper.size() || lower.size() == 0)
    throw Error(ErrorCode::Config, "optimization bounds must be non-empty and of equal length");
  for (Index i = 0; i < lower.size(); ++i)
    if (!(lower(i) <= upper(i)) || !std::isfinite(lower(i)) || !std::isfinite(upper(i)))
      throw Error(ErrorCode::Config,
                  "optimization bound " + std::to_string(i + 1) + ": lower must not exceed upper");
  if (initial) {
    if (initial->size() != lower.size())
      throw Error(ErrorCode::Config, "initial point length differs from bounds length");
    if ((initial->array() < lower.array()).any() || (initial->array() > upper.array()).any())
      throw Error(ErrorCode::Config, "initial point lies outside the bounds");
  }
}

namespace {

class CountingObjective {
 public:
  explicit CountingObjective(const Objective& f) : f_(f) {}
  double operator()(const VectorXd& x) {
    ++count_;
    const double v = f_(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }
  Index count() const { return count_; }

 private:
  const Objective& f_;
  Index count_ = 0;
};

VectorXd numeric_gradient(CountingObjective& f, const OptimProblem& problem, const VectorXd& x,
                          double fx, double rel_step) {
  const Index d = x.size();
  VectorXd g(d);
  VectorXd probe = x;
  for (Index i = 0; i < d; ++i) {
    const double h = rel_step * std::max(std::abs(x(i)), 1.0);
    const bool room_up = x(i) + h <= problem.upper(i);
    const bool room_down = x(i) - h >= problem.lower(i);
    if (room_up && room_down) {
      probe(i) = x(i) + h;
      const double fp = f(probe);
      probe(i) = x(i) - h;
      const double fm = f(probe);
      g(i) = (fp - fm) / (2.0 * h);
    } else if (room_up) {
      probe(i) = x(i) + h;
      g(i) = (f(probe) - fx) / h;
    } else if (room_down) {
      probe(i) = x(i) - h;
      g(i) = (fx - f(probe)) / h;
    } else {
      g(i) = 0.0;
    }
    probe(i) = x(i);
  }
  return g;
}

}  // namespace

OptimResult minimize_bfgs(const OptimProblem& problem, const BfgsOptions& opts) {
  problem.validate();
  CountingObjective f(problem.objective);
  const Index d = problem.dim();

  VectorXd x = problem.clamp(problem.initial.value_or(problem.midpoint()));
  double fx = f(x);
  VectorXd g = numeric_gradient(f, problem, x, fx, opts.grad_step);
  MatrixXd h = MatrixXd::Identity(d, d);

  OptimResult res;
  res.trace.push_back({0, fx});
  res.converged_by = StopReason::MaxIter;
  constexpr double c1 = 1e-4;

  for (Index iter = 1; iter <= opts.max_iter; ++iter) {
    // Variables pinned at a bound with the gradient pushing outward are frozen.
    std::vector<char> free(static_cast<std::size_t>(d), 1);
    VectorXd pg = g;
    for (Index i = 0; i < d; ++i) {
      const bool at_lower = x(i) <= problem.lower(i) && g(i) > 0.0;
      const bool at_upper = x(i) >= problem.upper(i) && g(i) < 0.0;
      if (at_lower || at_upper || problem.lower(i) == problem.upper(i)) {
        free[static_cast<std::size_t>(i)] = 0;
        pg(i) = 0.0;
      }
    }
    if (pg.lpNorm<Eigen::Infinity>() <= opts.grad_tol) {
      res.converged_by = StopReason::GradientTol;
      break;
    }

    VectorXd dir = -(h * pg);
    for (Index i = 0; i < d; ++i)
      if (!free[static_cast<std::size_t>(i)]) dir(i) = 0.0;
    if (dir.dot(pg) >= 0.0) {
      h.setIdentity();
      dir = -pg;
    }

    // Backtracking on the projected path.
    double t = 1.0;
    VectorXd trial;
    double ft = fx;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      trial = problem.clamp(x + t * dir);
      ft = f(trial);
      if (ft <= fx + c1 * g.dot(trial - x) && ft <= fx) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!h.isIdentity()) {
        h.setIdentity();
        continue;
      }
      res.converged_by = StopReason::StepTol;
      break;
    }

    const VectorXd s = trial - x;
    const double step = s.lpNorm<Eigen::Infinity>();
    x = trial;
    fx = ft;
    const VectorXd g_new = numeric_gradient(f, problem, x, fx, opts.grad_step);
    const VectorXd yv = g_new - g;
    g = g_new;
    res.trace.push_back({iter, fx});

    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm() && sy > 0.0) {
      const double rho = 1.0 / sy;
      const MatrixXd i_rsy = MatrixXd::Identity(d, d) - rho * s * yv.transpose();
      h = i_rsy * h * i_rsy.transpose() + rho * s * s.transpose();
    }
    if (step <= opts.step_tol * std::max(1.0, x.lpNorm<Eigen::Infinity>())) {
      res.converged_by = StopReason::StepTol;
      break;
    }
  }

  res.theta_star = x;
  res.objective_star = fx;
  res.evaluations = f.count();
  return res;
}

namespace {

struct Individual {
  VectorXd x;
  double value = std::numeric_limits<double>::infinity();
};

void evaluate_all(const Objective& objective, std::vector<Individual>& pop, std::size_t begin,
                  unsigned threads) {
  auto eval_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = objective(pop[i].x);
      pop[i].value = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    }
  };
  const std::size_t n = pop.size() - begin;
  if (threads <= 1 || n < 2) {
    eval_range(begin, pop.size());
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = begin + n * w / workers;
    const std::size_t hi = begin + n * (w + 1) / workers;
    pool.emplace_back(eval_range, lo, hi);
  }
  for (auto& t : pool) t.join();
}

bool better(const Individual& a, const Individual& b) { return a.value < b.value; }

}  // namespace

OptimResult minimize_ga(const OptimProblem& problem, const GaOptions& opts) {
  problem.validate();
  if (opts.pop_size < 4) throw Error(ErrorCode::Config, "GA population size must be at least 4");
  if (opts.max_generations < 1) throw Error(ErrorCode::Config, "GA needs at least one generation");
  if (opts.elite_count < 0 || opts.elite_count >= opts.pop_size)
    throw Error(ErrorCode::Config, "GA elite count must lie in [0, pop_size)");
  if (opts.tournament_k < 1) throw Error(ErrorCode::Config, "GA tournament size must be >= 1");

  const Index d = problem.dim();
  const auto pop_size = static_cast<std::size_t>(opts.pop_size);
  const VectorXd width = problem.upper - problem.lower;
  const double mutation_rate = std::min(0.5, 1.0 / static_cast<double>(d));
  RandomStream rng(opts.seed);
  Index evaluations = 0;

  std::vector<Individual> pop(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    pop[i].x.resize(d);
    for (Index j = 0; j < d; ++j) pop[i].x(j) = problem.lower(j) + width(j) * rng.uniform();
  }
  if (problem.initial) pop[0].x = *problem.initial;
  evaluate_all(problem.objective, pop, 0, opts.threads);
  evaluations += opts.pop_size;
  std::stable_sort(pop.begin(), pop.end(), better);

  OptimResult res;
  res.trace.push_back({1, pop.front().value});
  res.converged_by = StopReason::MaxIter;
  Index stalled = 0;

  auto tournament = [&]() -> const Individual& {
    std::size_t best = rng.below(pop_size);
    for (Index k = 1; k < opts.tournament_k; ++k) {
      const std::size_t c = rng.below(pop_size);
      if (pop[c].value < pop[best].value) best = c;
    }
    return pop[best];
  };

  for (Index gen = 2; gen <= opts.max_generations; ++gen) {
    std::vector<Individual> children(pop_size);
    for (auto& child : children) {
      const Individual& a = tournament();
      const Individual& b = tournament();
      child.x = a.x;
      if (rng.uniform() < opts.crossover_rate) {
        for (Index j = 0; j < d; ++j) {
          const double lo = std::min(a.x(j), b.x(j));
          const double hi = std::max(a.x(j), b.x(j));
          const double span = hi - lo;
          child.x(j) = lo - opts.blend_alpha * span +
                       (1.0 + 2.0 * opts.blend_alpha) * span * rng.uniform();
        }
      }
      for (Index j = 0; j < d; ++j)
        if (rng.uniform() < mutation_rate)
          child.x(j) += opts.mutation_sigma_fraction * width(j) * rng.normal();
      child.x = problem.clamp(child.x);
    }
    evaluate_all(problem.objective, children, 0, opts.threads);
    evaluations += opts.pop_size;
    std::stable_sort(children.begin(), children.end(), better);

    const double previous_best = pop.front().value;
    std::vector<Individual> next;
    next.reserve(pop_size);
    for (Index e = 0; e < opts.elite_count; ++e) next.push_back(pop[static_cast<std::size_t>(e)]);
    for (std::size_t c = 0; next.size() < pop_size; ++c) next.push_back(children[c]);
    std::stable_sort(next.begin(), next.end(), better);
    pop = std::move(next);

    res.trace.push_back({gen, pop.front().value});
    if (pop.front().value < previous_best - 1e-12 * std::abs(previous_best))
      stalled = 0;
    else
      ++stalled;
    if (opts.stall_generations > 0 && stalled >= opts.stall_generations) {
      res.converged_by = StopReason::GenerationStall;
      break;
    }
  }

  res.theta_star = pop.front().x;
  res.objective_star = pop.front().value;
  res.evaluations = evaluations;
  return res;
}

OptimResult minimize_hga(const OptimProblem& problem, const HgaOptions& opts) {
  OptimResult ga = minimize_ga(problem, opts.ga);
  OptimProblem local = problem;
  local.initial = ga.theta_star;
  OptimResult bfgs = minimize_bfgs(local, opts.bfgs);

  OptimResult res;
  res.evaluations = ga.evaluations + bfgs.evaluations;
  res.trace = ga.trace;
  const Index offset = ga.trace.empty() ? 0 : ga.trace.back().iteration;
  for (const auto& tp : bfgs.trace)
    res.trace.push_back({offset + tp.iteration, std::min(tp.best, ga.objective_star)});
  if (bfgs.objective_star <= ga.objective_star) {
    res.theta_star = bfgs.theta_star;
    res.objective_star = bfgs.objective_star;
  } else {
    res.theta_star = ga.theta_star;
    res.objective_star = ga.objective_star;
  }
  res.converged_by = bfgs.converged_by;
  return res;
}

}  // namespace krig
