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

#include "krig/demos.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "krig/csv.hpp"
#include "krig/registry.hpp"
#include "krig/serialize.hpp"

namespace krig {

namespace {

VectorXd linspace(Index n, double a, double b) { return VectorXd::LinSpaced(n, a, b); }

MatrixXd grid2(const VectorXd& g1, const VectorXd& g2) {
  MatrixXd out(g1.size() * g2.size(), 2);
  Index r = 0;
  for (Index j = 0; j < g2.size(); ++j)
    for (Index i = 0; i < g1.size(); ++i) {
      out(r, 0) = g1(i);
      out(r, 1) = g2(j);
      ++r;
    }
  return out;
}

MatrixXd hcat(std::initializer_list<MatrixXd> blocks) {
  Index cols = 0, rows = blocks.begin()->rows();
  for (const auto& b : blocks) cols += b.cols();
  MatrixXd out(rows, cols);
  Index c = 0;
  for (const auto& b : blocks) {
    out.middleCols(c, b.cols()) = b;
    c += b.cols();
  }
  return out;
}

ModelConfig forrester_config(Index n, const std::string& model, std::uint64_t seed, unsigned threads) {
  ModelConfig c;
  c.exp_design.input = InputModel{{{0.0, 1.0}}};
  c.exp_design.n_samples = n;
  c.exp_design.sampling = SamplingMethod::LHS;
  c.exp_design.true_model = model;
  c.family.kind = Family::Matern32;
  c.seed = seed;
  c.optim.ga.threads = threads;
  return c;
}

std::string fixed(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

BraninRun run_branin(Index n, const DemoOptions& options) {
  ModelConfig c;
  c.exp_design.input = branin_input();
  c.exp_design.n_samples = n;
  c.exp_design.sampling = SamplingMethod::LHS;
  c.exp_design.true_model = "branin";
  c.seed = options.seed;
  c.optim.ga.threads = options.threads;

  BraninRun run;
  run.model = create_model(c);
  run.x_val = grid2(linspace(20, -5.0, 10.0), linspace(20, 0.0, 15.0));
  run.y_val = demo_branin(run.x_val);
  run.nrmse = validate(run.model, run.x_val, run.y_val).nrmse;
  return run;
}

HierarchicalRun run_hierarchical(Index n_lf, Index n_hf, const DemoOptions& options) {
  // Distinct seeds give the two levels unrelated designs.
  const ModelConfig lf = forrester_config(n_lf, "forrester-lf", options.seed, options.threads);
  const ModelConfig hf =
      forrester_config(n_hf, "forrester-hf", splitmix64(options.seed ^ 0x4846ULL), options.threads);

  HierarchicalRun run;
  run.lf = create_model(lf);
  ModelConfig hier = hf;
  hier.trend = TrendSpec::model_mean(run.lf.outputs.front());
  hier.scaling = false;
  run.hierarchical = create_model(hier);
  run.hf_only = create_model(hf);

  run.x_val = linspace(40, 0.0, 1.0);
  run.y_val = lookup_model("forrester-hf")(run.x_val);
  run.nrmse_hierarchical = validate(run.hierarchical, run.x_val, run.y_val).nrmse;
  run.nrmse_hf_only = validate(run.hf_only, run.x_val, run.y_val).nrmse;
  return run;
}

ModelConfig fault_model_config(const MatrixXd& x, const VectorXd& y, std::uint64_t seed) {
  constexpr double pi = std::numbers::pi;
  ModelConfig c;
  c.name = "Fault field";
  c.exp_design.x = x;
  c.exp_design.y = MatrixXd(y);
  c.custom_kernel = lookup_kernel("fault");
  c.estimation.method = EstimationMethod::ML;
  c.optim.method = OptimMethod::HGA;
  c.optim.lower = (VectorXd(5) << 0.3, 0.1, 0.3, 0.1, pi / 6).finished();
  c.optim.upper = (VectorXd(5) << 0.9, 0.5, 0.9, 0.5, 5 * pi / 6).finished();
  c.optim.ga.pop_size = 60;
  c.optim.ga.max_generations = 50;
  c.scaling = false;
  c.seed = seed;
  return c;
}

FaultRun run_fault(Index per_hole, Index grid_n, const DemoOptions& options) {
  FaultRun run;
  // Boreholes stop short of the fault point on the top edge.
  run.x = borehole_locations(default_borehole_positions(), per_hole, 0.0, 0.95);
  MatrixXd all = run.x;
  if (grid_n > 0) {
    const VectorXd g = (VectorXd::LinSpaced(grid_n, 0.0, static_cast<double>(grid_n - 1)).array() + 0.5) /
                       static_cast<double>(grid_n);
    run.grid = grid2(g, g);
    all.conservativeResize(run.x.rows() + run.grid.rows(), 2);
    all.bottomRows(run.grid.rows()) = run.grid;
  }
  RandomStream stream = RandomStream(options.seed).child(0xfa17);
  const VectorXd field = demo_fault_field(all, run.truth, stream);
  run.y = field.head(run.x.rows());
  if (grid_n > 0) run.grid_truth = field.tail(run.grid.rows());

  ModelConfig c = fault_model_config(run.x, run.y, options.seed);
  c.optim.ga.threads = options.threads;
  run.model = create_model(c);
  run.theta_hat = run.model.primary().theta;
  return run;
}

std::vector<std::string> demo_names() { return {"branin", "fault", "hierarchical"}; }

std::vector<DemoFile> run_demo(std::string_view name, const DemoOptions& options) {
  std::vector<DemoFile> files;
  if (name == "branin") {
    const BraninRun run = run_branin(15, options);
    const auto& s = run.model.primary();
    files.push_back({"branin_model.json", serialize_model(run.model)});
    files.push_back({"branin_report.txt", print_report(run.model)});
    files.push_back({"branin_design.csv", format_csv(hcat({s.x_train_user, s.y_train}), {"x1", "x2", "y"})});
    const Prediction p = eval_model(run.model, run.x_val);
    files.push_back({"branin_grid.csv",
                     format_csv(hcat({run.x_val, run.y_val, p.mean, p.variance.cwiseSqrt()}),
                                {"x1", "x2", "truth", "mean", "std"})});
    files.push_back({"branin_validation.csv", "n_val,nrmse\n" + std::to_string(run.x_val.rows()) + "," +
                                                  format_number(run.nrmse) + "\n"});
  } else if (name == "hierarchical") {
    const HierarchicalRun run = run_hierarchical(12, 5, options);
    const auto& lf = run.lf.primary();
    const auto& hf = run.hierarchical.primary();
    files.push_back({"hierarchical_model.json", serialize_model(run.hierarchical)});
    files.push_back({"hf_only_model.json", serialize_model(run.hf_only)});
    files.push_back({"hierarchical_report.txt", print_report(run.hierarchical)});
    files.push_back({"hf_only_report.txt", print_report(run.hf_only)});
    files.push_back({"lf_design.csv", format_csv(hcat({lf.x_train_user, lf.y_train}), {"x", "y"})});
    files.push_back({"hf_design.csv", format_csv(hcat({hf.x_train_user, hf.y_train}), {"x", "y"})});
    const Prediction ph = eval_model(run.hierarchical, run.x_val);
    const Prediction po = eval_model(run.hf_only, run.x_val);
    const VectorXd lf_truth = lookup_model("forrester-lf")(run.x_val);
    files.push_back({"hierarchical_grid.csv",
                     format_csv(hcat({run.x_val, run.y_val, lf_truth, ph.mean, ph.variance.cwiseSqrt(),
                                      po.mean, po.variance.cwiseSqrt()}),
                                {"x", "hf_truth", "lf_truth", "hier_mean", "hier_std", "hf_only_mean",
                                 "hf_only_std"})});
    files.push_back({"hierarchical_nrmse.csv", "model,nrmse\nhierarchical," +
                                                   format_number(run.nrmse_hierarchical) + "\nhf-only," +
                                                   format_number(run.nrmse_hf_only) + "\n"});
  } else if (name == "fault") {
    const FaultRun run = run_fault(15, 25, options);
    files.push_back({"fault_model.json", serialize_model(run.model)});
    files.push_back({"fault_report.txt", print_report(run.model)});
    files.push_back({"fault_design.csv", format_csv(hcat({run.x, run.y}), {"x1", "x2", "y"})});
    const VectorXd truth = run.truth.packed();
    const char* names[] = {"theta11", "theta12", "theta21", "theta22", "alpha"};
    std::string table = "parameter,true,estimated,relative_error_pct\n";
    for (Index i = 0; i < 5; ++i)
      table += std::string(names[i]) + "," + fixed("%.3f", truth(i)) + "," + fixed("%.3f", run.theta_hat(i)) +
               "," + fixed("%.1f", 100.0 * std::abs(run.theta_hat(i) - truth(i)) / truth(i)) + "\n";
    files.push_back({"fault_theta.csv", table});
    const Prediction p = eval_model(run.model, run.grid);
    files.push_back({"fault_grid.csv",
                     format_csv(hcat({run.grid, run.grid_truth, p.mean, p.variance.cwiseSqrt()}),
                                {"x1", "x2", "truth", "mean", "std"})});
  } else {
    std::string list;
    for (const auto& n : demo_names()) list += (list.empty() ? "" : ", ") + n;
    throw Error(ErrorCode::Config, "unknown demo '" + std::string(name) + "' (valid: " + list + ")");
  }
  return files;
}

}  // namespace krig
