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

#include "krig/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "krig/config.hpp"
#include "krig/csv.hpp"
#include "krig/demos.hpp"
#include "krig/serialize.hpp"
#include "krig/version.hpp"

namespace krig {

namespace fs = std::filesystem;

namespace {

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Numerical: return 4;
  }
  return 4;
}

std::string_view category_label(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Config: return "config";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::Numerical: return "numerical";
  }
  return "numerical";
}

std::string one_line(std::string s) {
  for (auto& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

std::string timestamp() {
  std::time_t t = 0;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde && *sde) {
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path sibling(const fs::path& p, const std::string& suffix) {
  fs::path out = p.parent_path() / p.stem();
  out += suffix;
  return out;
}

struct Output {
  fs::path path;
  std::string content;
};

// All outputs are rendered before the first one is written; if a write
// fails the ones already in place are removed.
void commit(const std::vector<Output>& outputs) {
  std::vector<fs::path> done;
  try {
    for (const auto& o : outputs) {
      write_text_atomic(o.path, o.content);
      done.push_back(o.path);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : done) fs::remove(p, ec);
    throw;
  }
}

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool quiet = false;
  std::vector<std::string> argv;
  std::string started;

  unsigned thread_count() const {
    if (threads) return std::max(1u, *threads);
    if (const char* env = std::getenv("KRIG_THREADS"); env && *env) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
  }
};

std::string manifest(const Globals& g, const std::string& command, const nlohmann::json& extra,
                     const std::vector<fs::path>& inputs, const std::vector<Output>& outputs,
                     std::uint64_t seed) {
  nlohmann::json m;
  m["command"] = command;
  m["argv"] = g.argv;
  m["seed"] = seed;
  m["inputs"] = nlohmann::json::array();
  for (const auto& p : inputs) m["inputs"].push_back(p.string());
  m["outputs"] = nlohmann::json::array();
  for (const auto& o : outputs) m["outputs"].push_back(o.path.string());
  m["started"] = g.started;
  m["finished"] = timestamp();
  m["engine_version"] = kEngineVersion;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  return m.dump(2) + "\n";
}

MatrixXd read_matrix(const fs::path& p) { return read_csv(p).data; }

int cmd_fit(const Globals& g, const fs::path& config_path, const std::optional<fs::path>& x_path,
            const std::optional<fs::path>& y_path, const fs::path& out_path, std::ostream& out) {
  ModelConfig c = load_config(config_path);
  std::vector<fs::path> inputs{config_path};
  if (x_path) {
    c.exp_design.x = read_matrix(*x_path);
    inputs.push_back(*x_path);
  }
  if (y_path) {
    c.exp_design.y = read_matrix(*y_path);
    inputs.push_back(*y_path);
  }
  if (g.seed) c.seed = *g.seed;
  c.optim.ga.threads = g.thread_count();

  const KrigingModel model = create_model(c);
  const std::string report = print_report(model);
  std::vector<Output> outputs{{out_path, serialize_model(model)},
                              {sibling(out_path, ".report.txt"), report}};
  nlohmann::json extra{{"config", config_path.string()}};
  const std::string m = manifest(g, "fit", extra, inputs, outputs, c.seed);
  outputs.push_back({sibling(out_path, ".manifest.json"), m});
  commit(outputs);
  if (!g.quiet) out << report;
  return 0;
}

int cmd_predict(const Globals& g, const fs::path& model_path, const fs::path& x_path, bool variance,
                bool covariance, std::optional<double> alpha, const fs::path& out_path, std::ostream& out) {
  if (alpha && !(*alpha > 0.0 && *alpha < 1.0))
    throw Error(ErrorCode::Config, "--ci needs an alpha in (0, 1)");
  const KrigingModel model = deserialize_model(read_text(model_path));
  const MatrixXd xq = read_matrix(x_path);

  const Index nq = xq.rows();
  std::vector<std::string> header;
  std::vector<VectorXd> cols;
  std::vector<Output> outputs;
  const bool multi = model.n_outputs() > 1;
  for (Index k = 0; k < model.n_outputs(); ++k) {
    const std::string sfx = multi ? "_" + std::to_string(k + 1) : "";
    const Prediction p = eval_model(model, xq, {variance, covariance, alpha}, k);
    header.push_back("mean" + sfx);
    cols.push_back(p.mean);
    if (variance || covariance) {
      header.push_back("variance" + sfx);
      cols.push_back(p.variance);
    }
    if (alpha) {
      header.push_back("ci_lower" + sfx);
      cols.push_back(*p.lower);
      header.push_back("ci_upper" + sfx);
      cols.push_back(*p.upper);
    }
    if (covariance) outputs.push_back({sibling(out_path, ".cov" + sfx + ".csv"), format_csv(*p.covariance)});
  }
  MatrixXd table(nq, static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) table.col(static_cast<Index>(j)) = cols[j];
  outputs.insert(outputs.begin(), Output{out_path, format_csv(table, header)});
  const std::string m = manifest(g, "predict", {{"model", model_path.string()}}, {model_path, x_path},
                                 outputs, 0);
  outputs.push_back({sibling(out_path, ".manifest.json"), m});
  commit(outputs);
  if (!g.quiet) out << "wrote " << nq << " predictions to " << out_path.string() << "\n";
  return 0;
}

int cmd_sample(const Globals& g, const fs::path& config_path, Index n, const std::string& method,
               const fs::path& out_path, std::ostream& out) {
  const ModelConfig c = load_config(config_path);
  const SamplingMethod sm = parse_sampling(method);
  if (sm == SamplingMethod::User) throw Error(ErrorCode::Config, "--method must be LHS or MC");
  if (n < 1) throw Error(ErrorCode::Config, "--n must be positive");
  const InputModel& input = c.exp_design.input;
  if (input.dim() < 1) throw Error(ErrorCode::Config, "config defines no Input.Marginals");
  input.validate();
  const std::uint64_t seed = g.seed.value_or(c.seed);
  RandomStream stream(seed);
  const MatrixXd x = sm == SamplingMethod::LHS ? sample_lhs(input, n, stream) : sample_mc(input, n, stream);
  std::vector<std::string> header;
  for (Index j = 0; j < x.cols(); ++j) header.push_back("x" + std::to_string(j + 1));
  std::vector<Output> outputs{{out_path, format_csv(x, header)}};
  const std::string m = manifest(g, "sample", {{"config", config_path.string()}, {"method", method}},
                                 {config_path}, outputs, seed);
  outputs.push_back({sibling(out_path, ".manifest.json"), m});
  commit(outputs);
  if (!g.quiet) out << "wrote " << n << " samples to " << out_path.string() << "\n";
  return 0;
}

int cmd_demo(const Globals& g, const std::string& name, const fs::path& out_dir, std::ostream& out) {
  const std::uint64_t seed = g.seed.value_or(0);
  const auto files = run_demo(name, DemoOptions{seed, g.thread_count()});
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Data, "cannot create output directory '" + out_dir.string() + "'");
  std::vector<Output> outputs;
  for (const auto& f : files) outputs.push_back({out_dir / f.name, f.content});
  const std::string m = manifest(g, "demo", {{"demo", name}}, {}, outputs, seed);
  outputs.push_back({out_dir / "manifest.json", m});
  commit(outputs);
  if (!g.quiet)
    for (const auto& f : files)
      if (f.name.ends_with("report.txt") || f.name.ends_with("theta.csv") || f.name.ends_with("nrmse.csv") ||
          f.name.ends_with("validation.csv"))
        out << "== " << f.name << "\n" << f.content;
  return 0;
}

int cmd_report(const fs::path& model_path, std::ostream& out) {
  out << print_report(deserialize_model(read_text(model_path)));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Globals g;
  g.started = timestamp();
  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);

  CLI::App app{"Kriging surrogate models: fit, predict, sample, report and demos", "krig"};
  app.set_version_flag("--version", std::string(kEngineVersion));
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::uint64_t seed = 0;
  unsigned threads = 1;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (overrides the config Seed)");
  auto* threads_opt = app.add_option("--threads", threads, "Objective evaluation threads (env KRIG_THREADS)")
                          ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  std::string config, x, y, model_out, model_in, out_csv, method = "LHS", demo_name, out_dir = ".";
  bool variance = false, covariance = false;
  std::optional<double> ci;
  Index n = 0;

  auto* fit = app.add_subcommand("fit", "Fit a model from a config file and optional CSV data");
  fit->add_option("--config", config, "Model configuration")->required();
  auto* fit_x = fit->add_option("--x", x, "Design inputs CSV (overrides ExpDesign.X)");
  auto* fit_y = fit->add_option("--y", y, "Design responses CSV (overrides ExpDesign.Y)");
  fit->add_option("--out", model_out, "Model file to write")->required();

  auto* pred = app.add_subcommand("predict", "Evaluate a saved model at query points");
  pred->add_option("--model", model_in, "Model file")->required();
  pred->add_option("--x", x, "Query points CSV")->required();
  pred->add_flag("--variance", variance, "Add the predictor variance column");
  pred->add_flag("--covariance", covariance, "Write the full covariance to <out>.cov.csv");
  pred->add_option("--ci", ci, "Add 1 - alpha confidence bounds");
  pred->add_option("--out", out_csv, "Prediction CSV to write")->required();

  auto* samp = app.add_subcommand("sample", "Draw a design from the config's input model");
  samp->add_option("--config", config, "Configuration with Input.Marginals")->required();
  samp->add_option("--n", n, "Number of points")->required();
  samp->add_option("--method", method, "LHS or MC");
  samp->add_option("--out", out_csv, "CSV to write")->required();

  auto* demo = app.add_subcommand("demo", "Run a named end-to-end scenario");
  demo->add_option("name", demo_name, "branin, fault or hierarchical")->required();
  demo->add_option("--out-dir", out_dir, "Directory for the demo outputs");

  auto* rep = app.add_subcommand("report", "Print the report of a saved model");
  rep->add_option("--model", model_in, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "krig: config error (Usage): " << one_line(e.what()) << "\n";
    return 2;
  }
  if (seed_opt->count()) g.seed = seed;
  if (threads_opt->count()) g.threads = threads;

  try {
    if (*fit)
      return cmd_fit(g, config, fit_x->count() ? std::optional<fs::path>(x) : std::nullopt,
                     fit_y->count() ? std::optional<fs::path>(y) : std::nullopt, model_out, out);
    if (*pred) return cmd_predict(g, model_in, x, variance, covariance, ci, out_csv, out);
    if (*samp) return cmd_sample(g, config, n, method, out_csv, out);
    if (*demo) return cmd_demo(g, demo_name, out_dir, out);
    if (*rep) return cmd_report(model_in, out);
  } catch (const Error& e) {
    err << "krig: " << category_label(e.category()) << " error (" << to_string(e.code())
        << "): " << one_line(e.what()) << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "krig: numerical error (Internal): " << one_line(e.what()) << "\n";
    return 4;
  }
  return 2;
}

}  // namespace krig
