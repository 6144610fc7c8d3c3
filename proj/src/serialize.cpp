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

#include "krig/serialize.hpp"

#include <json.hpp>

#include "krig/registry.hpp"
#include "krig/version.hpp"

namespace krig {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json to_json(const VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const MatrixXd& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(to_json(VectorXd(m.row(i).transpose())));
  return a;
}

VectorXd vector_from(const json& a) {
  VectorXd v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Index>(i)) = a[i].get<double>();
  return v;
}

MatrixXd matrix_from(const json& a, Index cols) {
  MatrixXd m(static_cast<Index>(a.size()), cols);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (static_cast<Index>(a[i].size()) != cols)
      throw Error(ErrorCode::Data, "model file: ragged matrix");
    for (Index j = 0; j < cols; ++j) m(static_cast<Index>(i), j) = a[i][static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

TrendKind trend_kind_from(const std::string& name) {
  for (auto k : {TrendKind::Simple, TrendKind::Ordinary, TrendKind::Polynomial, TrendKind::CustomBasis,
                 TrendKind::CustomF, TrendKind::ModelMean})
    if (trend_kind_name(k) == name) return k;
  throw Error(ErrorCode::Data, "model file: unknown trend type '" + name + "'");
}

json output_to_json(const FittedKriging& s) {
  json k;
  if (s.kernel.is_custom()) {
    k["handle"] = s.kernel.custom->name;
  } else {
    if (s.kernel.family.kind == Family::Custom)
      throw Error(ErrorCode::Config, "models with a custom correlation family cannot be saved");
    k["family"] = family_name(s.kernel.family.kind);
    k["composition"] = composition_name(s.kernel.composition);
    k["isotropic"] = s.kernel.isotropic;
  }
  k["nugget"] = s.kernel.nugget;
  k["dim"] = s.kernel.dim;

  json t;
  t["type"] = trend_kind_name(s.trend.kind);
  switch (s.trend.kind) {
    case TrendKind::Simple: t["value"] = s.trend.known_constant; break;
    case TrendKind::Polynomial: t["degree"] = s.trend.degree; break;
    case TrendKind::CustomBasis:
    case TrendKind::CustomF:
      if (s.trend.custom_name.empty())
        throw Error(ErrorCode::Config, "custom trends must be registered by name to be saved");
      t["handle"] = s.trend.custom_name;
      break;
    case TrendKind::ModelMean: t["parent"] = output_to_json(*s.trend.parent); break;
    case TrendKind::Ordinary: break;
  }

  json o;
  o["kernel"] = k;
  o["trend"] = t;
  o["theta"] = to_json(s.theta);
  o["beta"] = to_json(s.beta);
  o["sigma2"] = s.sigma2;
  o["scaling"] = {{"enabled", s.scaling.enabled},
                  {"means", to_json(s.scaling.means)},
                  {"stds", to_json(s.scaling.stds)}};
  o["estimation"] = {{"method", s.estimation.method == EstimationMethod::ML ? "ML" : "CV"},
                     {"folds", s.estimation.folds}};
  o["objective"] = s.objective_value;
  o["jitter"] = {{"base", s.jitter.base}, {"max", s.jitter.max}};
  o["x"] = to_json(s.x_train_user);
  o["y"] = to_json(s.y_train);
  return o;
}

std::shared_ptr<const FittedKriging> output_from_json(const json& o) {
  const json& k = o.at("kernel");
  KernelSpec kernel;
  kernel.dim = k.at("dim").get<Index>();
  kernel.nugget = k.at("nugget").get<double>();
  if (k.contains("handle")) {
    kernel.custom = lookup_kernel(k.at("handle").get<std::string>());
    kernel.family.kind = Family::Custom;
  } else {
    kernel.family.kind = parse_family(k.at("family").get<std::string>());
    kernel.composition = parse_composition(k.at("composition").get<std::string>());
    kernel.isotropic = k.at("isotropic").get<bool>();
  }

  const json& t = o.at("trend");
  TrendSpec trend;
  switch (trend_kind_from(t.at("type").get<std::string>())) {
    case TrendKind::Simple: trend = TrendSpec::simple(t.at("value").get<double>()); break;
    case TrendKind::Ordinary: trend = TrendSpec::ordinary(); break;
    case TrendKind::Polynomial: trend = TrendSpec::polynomial(t.at("degree").get<int>()); break;
    case TrendKind::CustomBasis:
    case TrendKind::CustomF: trend = lookup_trend(t.at("handle").get<std::string>()); break;
    case TrendKind::ModelMean: trend = TrendSpec::model_mean(output_from_json(t.at("parent"))); break;
  }

  const json& sc = o.at("scaling");
  ScalingRecord scaling;
  scaling.enabled = sc.at("enabled").get<bool>();
  scaling.means = vector_from(sc.at("means"));
  scaling.stds = vector_from(sc.at("stds"));

  const MatrixXd x = matrix_from(o.at("x"), kernel.dim);
  const VectorXd y = vector_from(o.at("y"));
  KrigingProblem problem = make_problem(kernel, trend, x, y, scaling);
  problem.jitter = {o.at("jitter").at("base").get<double>(), o.at("jitter").at("max").get<double>()};
  FittedKriging s = assemble(problem, vector_from(o.at("theta")), o.at("sigma2").get<double>());
  s.estimation.method = parse_estimation(o.at("estimation").at("method").get<std::string>());
  s.estimation.folds = o.at("estimation").at("folds").get<Index>();
  s.objective_value = o.at("objective").get<double>();
  return std::make_shared<const FittedKriging>(std::move(s));
}

}  // namespace

std::string serialize_model(const KrigingModel& model) {
  json j;
  j["format"] = "krig-model";
  j["version"] = kFormatVersion;
  j["engine"] = kEngineVersion;
  j["name"] = model.name;
  j["sampling"] = sampling_name(model.sampling);
  j["optim_method"] = optim_method_name(model.optim_method);
  j["outputs"] = json::array();
  for (const auto& out : model.outputs) j["outputs"].push_back(output_to_json(*out));
  return j.dump(1) + "\n";
}

KrigingModel deserialize_model(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Data, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "krig-model")
      throw Error(ErrorCode::Data, "not a krig model file");
    if (j.at("version").get<int>() != kFormatVersion)
      throw Error(ErrorCode::Data, "unsupported model file version " + j.at("version").dump());
    KrigingModel model;
    model.name = j.at("name").get<std::string>();
    model.sampling = parse_sampling(j.at("sampling").get<std::string>());
    model.optim_method = parse_optim_method(j.at("optim_method").get<std::string>());
    for (const auto& o : j.at("outputs")) model.outputs.push_back(output_from_json(o));
    if (model.outputs.empty()) throw Error(ErrorCode::Data, "model file has no outputs");
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Data, std::string("model file is malformed: ") + e.what());
  }
}

}  // namespace krig
