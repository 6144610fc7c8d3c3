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

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "krig/cli.hpp"
#include "krig/config.hpp"
#include "krig/csv.hpp"
#include "krig/demos.hpp"

using namespace krig;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run krig_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "krig");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "krig_test_cli" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

bool has(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

// A 10-point Branin design and its config.
fs::path branin_setup(const fs::path& d) {
  RandomStream s(1);
  const MatrixXd x = sample_lhs(branin_input(), 10, s);
  write_text_atomic(d / "x.csv", format_csv(x, {"x1", "x2"}));
  write_text_atomic(d / "y.csv", format_csv(demo_branin(x), {"y"}));
  write_text_atomic(d / "model.cfg", "EstimMethod = ML\nSeed = 3\n");
  return d / "model.cfg";
}

}  // namespace

TEST_CASE("fit, report and predict") {
  const fs::path d = fresh_dir("fit");
  const fs::path cfg = branin_setup(d);
  const Run fit = krig_cli({"fit", "--config", cfg.string(), "--x", (d / "x.csv").string(), "--y",
                            (d / "y.csv").string(), "--out", (d / "m.json").string()});
  REQUIRE(fit.code == 0);
  CHECK(fs::exists(d / "m.json"));
  CHECK(fs::exists(d / "m.manifest.json"));
  const std::string report = read_text(d / "m.report.txt");
  CHECK(fit.out == report);
  CHECK(has(report, "Maximum-Likelihood"));

  const Run rep = krig_cli({"report", "--model", (d / "m.json").string()});
  CHECK(rep.code == 0);
  CHECK(rep.out == report);

  const Run pred = krig_cli({"--quiet", "predict", "--model", (d / "m.json").string(), "--x",
                             (d / "x.csv").string(), "--variance", "--ci", "0.05", "--covariance", "--out",
                             (d / "p.csv").string()});
  REQUIRE(pred.code == 0);
  CHECK(pred.out.empty());
  const CsvTable p = read_csv(d / "p.csv");
  CHECK(p.header == std::vector<std::string>{"mean", "variance", "ci_lower", "ci_upper"});
  const VectorXd y = read_csv(d / "y.csv").data.col(0);
  CHECK((p.data.col(0) - y).cwiseAbs().maxCoeff() <= 1e-8 * y.cwiseAbs().maxCoeff());
  CHECK((p.data.col(2).array() <= p.data.col(0).array()).all());
  CHECK((p.data.col(0).array() <= p.data.col(3).array()).all());
  const MatrixXd cov = read_csv(d / "p.cov.csv").data;
  CHECK(cov.rows() == 10);
  CHECK(cov.diagonal() == p.data.col(1));
}

TEST_CASE("predict on fresh points matches the library") {
  const fs::path d = fresh_dir("fresh");
  const fs::path cfg = branin_setup(d);
  REQUIRE(krig_cli({"--quiet", "fit", "--config", cfg.string(), "--x", (d / "x.csv").string(), "--y",
                    (d / "y.csv").string(), "--out", (d / "m.json").string()})
              .code == 0);
  RandomStream s(2);
  const MatrixXd q = sample_mc(branin_input(), 6, s);
  write_text_atomic(d / "q.csv", format_csv(q));
  REQUIRE(krig_cli({"--quiet", "predict", "--model", (d / "m.json").string(), "--x", (d / "q.csv").string(),
                    "--out", (d / "p.csv").string()})
              .code == 0);
  ModelConfig c = load_config(cfg);
  c.exp_design.x = read_csv(d / "x.csv").data;
  c.exp_design.y = read_csv(d / "y.csv").data;
  const VectorXd want = eval_model(create_model(c), q).mean;
  CHECK(read_csv(d / "p.csv").data.col(0) == want);
}

TEST_CASE("exit codes and diagnostics") {
  const fs::path d = fresh_dir("errors");
  const fs::path cfg = branin_setup(d);

  write_text_atomic(d / "bad.csv", "x1,x2\n1,2\n3,oops\n");
  const Run data = krig_cli({"fit", "--config", cfg.string(), "--x", (d / "bad.csv").string(), "--y",
                             (d / "y.csv").string(), "--out", (d / "m.json").string()});
  CHECK(data.code == 3);
  CHECK(has(data.err, "krig: data error"));
  CHECK(has(data.err, "bad.csv:3"));
  CHECK(std::count(data.err.begin(), data.err.end(), '\n') == 1);

  write_text_atomic(d / "typo.cfg", "EstimMethod = ML\nCorr.Famly = gaussian\n");
  const Run conf = krig_cli({"fit", "--config", (d / "typo.cfg").string(), "--x", (d / "x.csv").string(),
                             "--y", (d / "y.csv").string(), "--out", (d / "m.json").string()});
  CHECK(conf.code == 2);
  CHECK(has(conf.err, "krig: config error"));
  CHECK(has(conf.err, "typo.cfg:2"));

  write_text_atomic(d / "fault.cfg", "Corr.Handle = fault\nEstimMethod = ML\nOptim.Bounds = [0.3 0.1 0.3 0.1; 0.9 0.5 0.9 0.5]\n");
  const Run bounds = krig_cli({"fit", "--config", (d / "fault.cfg").string(), "--x", (d / "x.csv").string(),
                               "--y", (d / "y.csv").string(), "--out", (d / "m.json").string()});
  CHECK(bounds.code == 2);
  CHECK(has(bounds.err, "length 4"));
  CHECK(has(bounds.err, "5 hyperparameters"));

  write_text_atomic(d / "x2.csv", "x\n0\n1\n");
  write_text_atomic(d / "y2.csv", "y\n1\n2\n");
  write_text_atomic(d / "quad.cfg", "Trend.Type = quadratic\nEstimMethod = ML\nScaling = false\n");
  const Run num = krig_cli({"fit", "--config", (d / "quad.cfg").string(), "--x", (d / "x2.csv").string(),
                            "--y", (d / "y2.csv").string(), "--out", (d / "m.json").string()});
  CHECK(num.code == 4);
  CHECK(has(num.err, "krig: numerical error"));

  CHECK(krig_cli({"fit", "--config", (d / "missing.cfg").string(), "--out", (d / "m.json").string()}).code == 2);
  CHECK(krig_cli({"predict", "--model", (d / "missing.json").string(), "--x", (d / "x.csv").string(), "--out",
                  (d / "p.csv").string()})
            .code == 3);
  CHECK(krig_cli({"frobnicate"}).code == 2);
  CHECK(krig_cli({}).code == 2);

  const Run demo = krig_cli({"demo", "nosuch", "--out-dir", (d / "demo").string()});
  CHECK(demo.code == 2);
  CHECK(has(demo.err, "branin"));
  CHECK(has(demo.err, "fault"));
  CHECK(has(demo.err, "hierarchical"));

  // Nothing was written by the failed commands.
  CHECK(!fs::exists(d / "m.json"));
  CHECK(!fs::exists(d / "m.report.txt"));
  CHECK(!fs::exists(d / "demo"));
  CHECK(!fs::exists(d / "p.csv"));
}

TEST_CASE("sample") {
  const fs::path d = fresh_dir("sample");
  write_text_atomic(d / "in.cfg",
                    "Input.Marginals(1).Type = 'Uniform'\nInput.Marginals(1).Parameters = [-5 10]\n"
                    "Input.Marginals(2).Type = 'Uniform'\nInput.Marginals(2).Parameters = [0 15]\n");
  const Run r = krig_cli({"sample", "--config", (d / "in.cfg").string(), "--n", "15", "--method", "LHS", "--out",
                          (d / "ed.csv").string(), "--seed", "4"});
  REQUIRE(r.code == 0);
  const MatrixXd x = read_csv(d / "ed.csv").data;
  CHECK(x.rows() == 15);
  CHECK(x.col(0).minCoeff() >= -5);
  CHECK(x.col(0).maxCoeff() <= 10);
  CHECK(x.col(1).minCoeff() >= 0);
  CHECK(x.col(1).maxCoeff() <= 15);
  RandomStream s(4);
  CHECK(x == sample_lhs(branin_input(), 15, s));
  CHECK(krig_cli({"sample", "--config", (d / "in.cfg").string(), "--n", "5", "--method", "Sobol", "--out",
                  (d / "z.csv").string()})
            .code == 2);
}

TEST_CASE("manifest replay reproduces outputs byte for byte") {
  const fs::path d = fresh_dir("replay");
  REQUIRE(krig_cli({"demo", "branin", "--out-dir", (d / "a").string(), "--seed", "7", "--quiet"}).code == 0);
  const auto m = nlohmann::json::parse(read_text(d / "a" / "manifest.json"));
  CHECK(m["command"] == "demo");
  CHECK(m["seed"] == 7);
  CHECK(m["engine_version"].is_string());

  std::vector<std::string> argv = m["argv"].get<std::vector<std::string>>();
  argv.erase(argv.begin());
  for (auto& a : argv)
    if (a == (d / "a").string()) a = (d / "b").string();
  REQUIRE(krig_cli(argv).code == 0);

  const auto names = listing(d / "a");
  CHECK(names == listing(d / "b"));
  for (const auto& n : names)
    if (n != "manifest.json") CHECK_MESSAGE(read_text(d / "a" / n) == read_text(d / "b" / n), n);
}

TEST_CASE("every demo writes its files") {
  const fs::path d = fresh_dir("demos");
  for (const auto& name : demo_names()) {
    const Run r = krig_cli({"--threads", "2", "demo", name, "--out-dir", (d / name).string()});
    CHECK_MESSAGE(r.code == 0, r.err);
    CHECK(fs::exists(d / name / "manifest.json"));
    CHECK(listing(d / name).size() >= 5);
  }
  const std::string theta = read_text(d / "fault" / "fault_theta.csv");
  CHECK(std::count(theta.begin(), theta.end(), '\n') == 6);
  CHECK(has(theta, "alpha"));
}

TEST_CASE("version") {
  const Run r = krig_cli({"--version"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "0.1.0"));
}
