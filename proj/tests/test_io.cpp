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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "krig/config.hpp"
#include "krig/csv.hpp"
#include "krig/demos.hpp"
#include "krig/registry.hpp"
#include "krig/serialize.hpp"

using namespace krig;

namespace {

std::string error_text(const std::function<void()>& f, ErrorCategory* cat = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (cat) *cat = e.category();
    return e.what();
  }
  return {};
}

bool has(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "krig_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void round_trip(const KrigingModel& m, const MatrixXd& xq) {
  const std::string text = serialize_model(m);
  const KrigingModel back = deserialize_model(text);
  CHECK(serialize_model(back) == text);
  CHECK(print_report(back) == print_report(m));
  for (Index k = 0; k < m.n_outputs(); ++k) {
    EvalOptions o;
    o.covariance = true;
    const Prediction a = eval_model(m, xq, o, k);
    const Prediction b = eval_model(back, xq, o, k);
    CHECK(a.mean == b.mean);
    CHECK(a.variance == b.variance);
    CHECK(*a.covariance == *b.covariance);
  }
}

}  // namespace

TEST_CASE("csv parsing") {
  const CsvTable t = parse_csv("x1,x2\n1,2\n-3.5, 4e-2\n");
  CHECK(t.header == std::vector<std::string>{"x1", "x2"});
  CHECK(t.data.rows() == 2);
  CHECK(t.data(1, 0) == -3.5);
  CHECK(t.data(1, 1) == 0.04);

  const CsvTable bare = parse_csv("1,2,3\r\n4,5,6\n\n");
  CHECK(bare.header.empty());
  CHECK(bare.data.rows() == 2);
  CHECK(bare.data(1, 2) == 6.0);

  const std::string ragged = error_text([] { parse_csv("a,b\n1,2\n3\n", "pts.csv"); });
  CHECK(has(ragged, "pts.csv:3"));
  ErrorCategory cat{};
  const std::string word = error_text([] { parse_csv("1,2\n3,x\n", "pts.csv"); }, &cat);
  CHECK(has(word, "pts.csv:2"));
  CHECK(cat == ErrorCategory::Data);
  const CsvTable empty = parse_csv("x,y\n");
  CHECK(empty.data.rows() == 0);
  CHECK(empty.data.cols() == 2);
}

TEST_CASE("numbers survive a csv round trip") {
  RandomStream s(1);
  MatrixXd m(20, 3);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = s.normal() * std::pow(10.0, s.normal() * 30);
  m(0, 0) = 0.1;
  m(0, 1) = -0.0;
  m(0, 2) = 1e-310;
  const CsvTable t = parse_csv(format_csv(m, {"a", "b", "c"}));
  CHECK(t.data == m);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.0) == "3");

  const auto path = scratch("round.csv");
  write_text_atomic(path, format_csv(m));
  CHECK(read_csv(path).data == m);
  CHECK(!std::filesystem::exists(path.string() + ".tmp"));
  CHECK_THROWS_AS(read_csv(scratch("missing.csv")), Error);
}

TEST_CASE("scalar expressions") {
  constexpr double pi = std::numbers::pi;
  CHECK(parse_scalar("5*pi/6") == doctest::Approx(5 * pi / 6));
  CHECK(parse_scalar("pi/6") == doctest::Approx(pi / 6));
  CHECK(parse_scalar("-1.5e-3") == -1.5e-3);
  CHECK(parse_scalar("2*(3 + -1)") == 4.0);
  CHECK(parse_scalar("1 - 2 * 3") == -5.0);
  CHECK_THROWS_AS(parse_scalar("2*"), Error);
  CHECK_THROWS_AS(parse_scalar("foo"), Error);
}

TEST_CASE("config files") {
  const ModelConfig c = parse_config(R"(% fault setup
KOptions.Type = 'Metamodel';
KOptions.Name = 'Fault';
Trend.Type = 'linear'
Corr.Family = 'Matern-3_2'   # trailing comment
Corr.Type = separable
Corr.Nugget = 1e-4
EstimMethod = 'ML'
Optim.Method = 'GA'
Optim.Bounds = [0.3 0.1 pi/6; 0.9 0.5 5*pi/6]
Optim.MaxIter = 50
Optim.HGA.nPop = 60
Scaling = false
Seed = 12
ExpDesign.Sampling = 'LHS'
ExpDesign.NSamples = 15
ExpDesign.TrueModel = branin
Input.Marginals(1).Type = 'Uniform'
Input.Marginals(1).Parameters = [-5, 10]
Input.Marginals(2).Parameters = [0 15]
)");
  CHECK(c.name == "Fault");
  CHECK(c.trend.kind == TrendKind::Polynomial);
  CHECK(c.trend.degree == 1);
  CHECK(c.family.kind == Family::Matern32);
  CHECK(c.composition == Composition::Separable);
  CHECK(c.nugget == 1e-4);
  CHECK(c.estimation.method == EstimationMethod::ML);
  CHECK(c.optim.method == OptimMethod::GA);
  CHECK((*c.optim.lower)(2) == doctest::Approx(std::numbers::pi / 6));
  CHECK((*c.optim.upper)(2) == doctest::Approx(5 * std::numbers::pi / 6));
  CHECK(c.optim.ga.max_generations == 50);
  CHECK(c.optim.ga.pop_size == 60);
  CHECK(c.scaling == false);
  CHECK(c.seed == 12);
  CHECK(c.exp_design.sampling == SamplingMethod::LHS);
  CHECK(c.exp_design.n_samples == 15);
  CHECK(c.exp_design.input.marginals.size() == 2);
  CHECK(c.exp_design.input.marginals[0].lower == -5.0);
  CHECK(c.exp_design.input.marginals[1].upper == 15.0);

  const ModelConfig d = parse_config("");
  CHECK(d.trend.kind == TrendKind::Ordinary);
  CHECK(d.family.kind == Family::Matern52);
  CHECK(d.estimation.method == EstimationMethod::CV);
  CHECK(d.optim.method == OptimMethod::HGA);
  CHECK(!d.scaling.has_value());
}

TEST_CASE("config errors carry locations") {
  ErrorCategory cat{};
  const std::string unknown = error_text([] { parse_config("Seed = 1\nFoo.Bar = 2\n", {}, "m.cfg"); }, &cat);
  CHECK(has(unknown, "m.cfg:2"));
  CHECK(has(unknown, "Foo.Bar"));
  CHECK(cat == ErrorCategory::Config);
  CHECK(has(error_text([] { parse_config("\n\nOptim.Bounds = [1 2 3]", {}, "m.cfg"); }), "m.cfg:3"));
  CHECK(has(error_text([] { parse_config("Trend.Type = polynomial"); }), "Degree"));
  CHECK(has(error_text([] { parse_config("Corr.Handle = nope"); }), "fault"));
  CHECK(has(error_text([] { parse_config("Trend.Type = cubic"); }), "cubic"));
  CHECK(has(error_text([] { parse_config("Seed = -1"); }), "Seed"));
  CHECK(!error_text([] { load_config(scratch("absent.cfg")); }).empty());
}

TEST_CASE("config reads design CSVs relative to its directory") {
  const auto dir = scratch("cfgdir");
  std::filesystem::create_directories(dir);
  write_text_atomic(dir / "x.csv", "x\n0\n0.5\n1\n");
  write_text_atomic(dir / "y.csv", "y\n1\n2\n4\n");
  write_text_atomic(dir / "model.cfg", "ExpDesign.X = 'x.csv'\nExpDesign.Y = y.csv\n");
  const ModelConfig c = load_config(dir / "model.cfg");
  CHECK(c.exp_design.x->rows() == 3);
  CHECK((*c.exp_design.y)(2, 0) == 4.0);
}

TEST_CASE("registry") {
  CHECK(lookup_model("branin")((MatrixXd(1, 2) << 0, 0).finished())(0) == doctest::Approx(55.602113));
  const auto names = model_names();
  CHECK(std::find(names.begin(), names.end(), "forrester-hf") != names.end());
  CHECK(has(error_text([] { lookup_model("nope"); }), "branin"));
  CHECK(lookup_kernel("fault").theta_length == 5);

  register_model("cube", [](const MatrixXd& x) { return VectorXd(x.col(0).array().cube()); });
  CHECK(lookup_model("cube")(MatrixXd::Constant(1, 1, 2.0))(0) == 8.0);

  register_trend("sines", CustomTrend{{}, {[](const VectorXd& x) { return std::sin(x(0)); },
                                            [](const VectorXd& x) { return std::cos(x(0)); }}});
  const TrendSpec t = lookup_trend("sines");
  CHECK(t.kind == TrendKind::CustomBasis);
  CHECK(t.basis_functions.size() == 2);
  CHECK_THROWS_AS(lookup_trend("nope"), Error);
}

TEST_CASE("serialized models predict identically") {
  RandomStream s(5);
  SUBCASE("defaults, two outputs") {
    ModelConfig c;
    MatrixXd x = sample_lhs(branin_input(), 10, s);
    MatrixXd y(10, 2);
    y << demo_branin(x), x.col(0).array().sin().matrix();
    c.exp_design.x = x;
    c.exp_design.y = y;
    round_trip(create_model(c), sample_mc(branin_input(), 7, s));
  }
  SUBCASE("ML, separable gaussian, quadratic trend, nugget") {
    ModelConfig c;
    c.exp_design.x = sample_lhs(branin_input(), 12, s);
    c.exp_design.y = MatrixXd(demo_branin(*c.exp_design.x));
    c.estimation.method = EstimationMethod::ML;
    c.family.kind = Family::Gaussian;
    c.composition = Composition::Separable;
    c.trend = TrendSpec::polynomial(2);
    c.nugget = 1e-6;
    c.optim.method = OptimMethod::BFGS;
    round_trip(create_model(c), sample_mc(branin_input(), 5, s));
  }
  SUBCASE("simple trend, isotropic, 3-fold CV") {
    ModelConfig c;
    c.exp_design.x = sample_lhs(InputModel{{{0, 1}, {0, 2}}}, 9, s);
    c.exp_design.y = MatrixXd(c.exp_design.x->rowwise().sum());
    c.trend = TrendSpec::simple(1.5);
    c.isotropic = true;
    c.estimation.folds = 3;
    round_trip(create_model(c), sample_mc(InputModel{{{0, 1}, {0, 2}}}, 5, s));
  }
  SUBCASE("registered custom trend") {
    ModelConfig c;
    c.exp_design.x = MatrixXd(VectorXd::LinSpaced(6, 0.0, 3.0));
    c.exp_design.y = MatrixXd(c.exp_design.x->array().sin().matrix());
    c.trend = lookup_trend("sines");
    round_trip(create_model(c), MatrixXd(VectorXd::LinSpaced(4, 0.2, 2.9)));
  }
  SUBCASE("fault kernel") {
    const FaultRun r = run_fault(6, 0, DemoOptions{3, 1});
    round_trip(r.model, borehole_locations({0.3, 0.7}, 3, 0.1, 0.9));
  }
  SUBCASE("hierarchical") {
    const HierarchicalRun r = run_hierarchical(12, 5, DemoOptions{2, 1});
    round_trip(r.hierarchical, MatrixXd(VectorXd::LinSpaced(9, 0.0, 1.0)));
  }
}

TEST_CASE("malformed model files") {
  ErrorCategory cat{};
  error_text([] { deserialize_model("{not json"); }, &cat);
  CHECK(cat == ErrorCategory::Data);
  CHECK(!error_text([] { deserialize_model(R"({"format":"other","version":1})"); }).empty());
  CHECK(!error_text([] { deserialize_model(R"({"format":"krig-model","version":99})"); }).empty());
}
