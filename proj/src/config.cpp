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

#include "krig/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <regex>
#include <string>
#include <vector>

#include "krig/csv.hpp"
#include "krig/registry.hpp"

namespace krig {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// sum := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*
// factor := ['-'|'+'] (number | 'pi' | '(' sum ')')
class ScalarParser {
 public:
  explicit ScalarParser(std::string_view s) : s_(s) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail() const {
    throw Error(ErrorCode::Config, "cannot read '" + std::string(s_) + "' as a number");
  }
  double sum() {
    double v = term();
    while (true) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        const char op = s_[pos_++];
        const double rhs = term();
        v = op == '+' ? v + rhs : v - rhs;
      } else {
        return v;
      }
    }
  }
  double term() {
    double v = factor();
    while (true) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
        const char op = s_[pos_++];
        const double rhs = factor();
        v = op == '*' ? v * rhs : v / rhs;
      } else {
        return v;
      }
    }
  }
  double factor() {
    skip();
    if (pos_ >= s_.size()) fail();
    if (s_[pos_] == '-') {
      ++pos_;
      return -factor();
    }
    if (s_[pos_] == '+') {
      ++pos_;
      return factor();
    }
    if (s_[pos_] == '(') {
      ++pos_;
      const double v = sum();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail();
      ++pos_;
      return v;
    }
    if (s_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return std::numbers::pi;
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (res.ec != std::errc()) fail();
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

bool is_matrix(std::string_view v) { return !v.empty() && v.front() == '['; }

MatrixXd parse_matrix(std::string_view v) {
  if (v.size() < 2 || v.back() != ']') throw Error(ErrorCode::Config, "unterminated matrix '" + std::string(v) + "'");
  v = v.substr(1, v.size() - 2);
  std::vector<std::vector<double>> rows;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto semi = v.find(';', start);
    const std::string_view row = trim(v.substr(start, semi == std::string_view::npos ? semi : semi - start));
    std::vector<double> vals;
    std::size_t p = 0;
    while (p < row.size()) {
      while (p < row.size() && (row[p] == ' ' || row[p] == ',' || row[p] == '\t')) ++p;
      std::size_t q = p;
      while (q < row.size() && row[q] != ' ' && row[q] != ',' && row[q] != '\t') ++q;
      if (q > p) vals.push_back(parse_scalar(row.substr(p, q - p)));
      p = q;
    }
    if (!vals.empty()) rows.push_back(std::move(vals));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  if (rows.empty()) return MatrixXd(0, 0);
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw Error(ErrorCode::Config, "matrix rows have different lengths");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  }
  return m;
}

VectorXd parse_vector(std::string_view v) {
  const MatrixXd m = is_matrix(v) ? parse_matrix(v) : MatrixXd::Constant(1, 1, parse_scalar(v));
  if (m.rows() != 1 && m.cols() != 1)
    throw Error(ErrorCode::Config, "expected a vector, got a " + std::to_string(m.rows()) + "x" +
                                       std::to_string(m.cols()) + " matrix");
  return Eigen::Map<const VectorXd>(m.data(), m.size());
}

bool parse_bool(std::string_view v) {
  const auto s = lower(v);
  if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "off" || s == "no") return false;
  throw Error(ErrorCode::Config, "expected true or false, got '" + std::string(v) + "'");
}

Index parse_count(std::string_view v) {
  const double d = parse_scalar(v);
  if (!(d >= 0.0) || d != std::floor(d) || d > 1e9)
    throw Error(ErrorCode::Config, "expected a non-negative integer, got '" + std::string(v) + "'");
  return static_cast<Index>(d);
}

std::string unquote(std::string_view v) {
  if (v.size() >= 2 && (v.front() == '\'' || v.front() == '"') && v.back() == v.front())
    v = v.substr(1, v.size() - 2);
  if (!v.empty() && v.front() == '@') v.remove_prefix(1);
  return std::string(v);
}

MatrixXd data_value(std::string_view v, const std::filesystem::path& base) {
  if (is_matrix(v)) return parse_matrix(v);
  const std::filesystem::path p = base / unquote(v);
  return read_csv(p).data;
}

TrendSpec trend_from(std::string_view type) {
  const auto t = lower(type);
  if (t == "simple") return TrendSpec::simple(0.0);
  if (t == "ordinary") return TrendSpec::ordinary();
  if (t == "linear") return TrendSpec::polynomial(1);
  if (t == "quadratic") return TrendSpec::polynomial(2);
  if (t == "polynomial") return TrendSpec::polynomial(1);
  if (t == "custom") {
    TrendSpec s;
    s.kind = TrendKind::CustomF;
    return s;
  }
  throw Error(ErrorCode::Config, "unknown Trend.Type '" + std::string(type) +
                                     "' (use simple, ordinary, linear, quadratic, polynomial or custom)");
}

}  // namespace

double parse_scalar(std::string_view text) { return ScalarParser(trim(text)).parse(); }

ModelConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                         std::string_view source) {
  ModelConfig c;
  static const std::regex marginal_key(R"(input\.marginals\((\d+)\)\.(type|parameters))");
  std::optional<std::string> trend_type;
  std::optional<double> trend_value;
  std::optional<int> trend_degree;
  std::optional<std::string> trend_handle;
  std::optional<Index> max_iter;
  std::optional<Index> pop;

  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find_first_of("#%"); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty() && line.back() == ';') line = trim(line.substr(0, line.size() - 1));
    if (line.empty()) continue;

    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::Config, where + "expected 'Key = value'");
    std::string key = lower(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.rfind("koptions.", 0) == 0) key = key.substr(9);

    try {
      std::smatch m;
      if (key == "type" || key == "metatype") {
        // Framework-level selectors; this tool only builds Kriging models.
      } else if (key == "name") {
        c.name = unquote(value);
      } else if (key == "expdesign.x") {
        c.exp_design.x = data_value(value, base_dir);
      } else if (key == "expdesign.y") {
        c.exp_design.y = data_value(value, base_dir);
      } else if (key == "expdesign.sampling") {
        c.exp_design.sampling = parse_sampling(unquote(value));
      } else if (key == "expdesign.nsamples") {
        c.exp_design.n_samples = parse_count(value);
      } else if (key == "expdesign.truemodel") {
        c.exp_design.true_model = unquote(value);
      } else if (std::regex_match(key, m, marginal_key)) {
        const auto idx = static_cast<std::size_t>(std::stoul(m[1].str()));
        if (idx < 1 || idx > 1000) throw Error(ErrorCode::Config, "marginal index out of range");
        if (c.exp_design.input.marginals.size() < idx) c.exp_design.input.marginals.resize(idx);
        auto& marg = c.exp_design.input.marginals[idx - 1];
        if (m[2] == "type") {
          if (lower(unquote(value)) != "uniform")
            throw Error(ErrorCode::Config, "only Uniform marginals are supported");
        } else {
          const VectorXd p = parse_vector(value);
          if (p.size() != 2) throw Error(ErrorCode::Config, "Uniform parameters are [lower upper]");
          marg = {p(0), p(1)};
        }
      } else if (key == "trend.type") {
        trend_type = unquote(value);
      } else if (key == "trend.value") {
        trend_value = parse_scalar(value);
      } else if (key == "trend.degree") {
        trend_degree = static_cast<int>(parse_count(value));
      } else if (key == "trend.handle" || key == "trend.customf") {
        trend_handle = unquote(value);
      } else if (key == "corr.type") {
        c.composition = parse_composition(unquote(value));
      } else if (key == "corr.family") {
        c.family.kind = parse_family(unquote(value));
        if (c.family.kind == Family::Custom)
          throw Error(ErrorCode::Config, "custom families are set through Corr.Handle");
      } else if (key == "corr.isotropic") {
        c.isotropic = parse_bool(value);
      } else if (key == "corr.nugget") {
        c.nugget = parse_scalar(value);
      } else if (key == "corr.handle") {
        c.custom_kernel = lookup_kernel(unquote(value));
      } else if (key == "estimmethod") {
        c.estimation.method = parse_estimation(unquote(value));
      } else if (key == "cv.folds") {
        c.estimation.folds = parse_count(value);
      } else if (key == "optim.method") {
        c.optim.method = parse_optim_method(unquote(value));
      } else if (key == "optim.bounds") {
        const MatrixXd b = parse_matrix(value);
        if (b.rows() != 2)
          throw Error(ErrorCode::Config, "Optim.Bounds must have two rows [lower; upper]");
        c.optim.lower = b.row(0).transpose();
        c.optim.upper = b.row(1).transpose();
      } else if (key == "optim.initialvalue") {
        c.optim.initial = parse_vector(value);
      } else if (key == "optim.maxiter") {
        max_iter = parse_count(value);
      } else if (key == "optim.hga.npop" || key == "optim.ga.npop") {
        pop = parse_count(value);
      } else if (key == "optim.ga.nstall" || key == "optim.hga.nstall") {
        c.optim.ga.stall_generations = parse_count(value);
      } else if (key == "optim.tol") {
        c.optim.bfgs.grad_tol = parse_scalar(value);
      } else if (key == "scaling") {
        c.scaling = parse_bool(value);
      } else if (key == "seed") {
        const std::string s(trim(value));
        std::uint64_t seed = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), seed);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
          throw Error(ErrorCode::Config, "Seed must be a non-negative integer");
        c.seed = seed;
      } else {
        throw Error(ErrorCode::Config, "unknown option '" + std::string(trim(line.substr(0, eq))) + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Config) throw Error(ErrorCode::Config, where + e.what());
      throw Error(e.code(), where + e.what());
    }
  }

  if (trend_type || trend_handle) {
    c.trend = trend_from(trend_type.value_or("custom"));
    if (c.trend.kind == TrendKind::CustomF) {
      if (!trend_handle)
        throw Error(ErrorCode::Config, std::string(source) + ": Trend.Type custom needs Trend.Handle");
      c.trend = lookup_trend(*trend_handle);
    }
  }
  if (trend_value) {
    if (c.trend.kind != TrendKind::Simple)
      throw Error(ErrorCode::Config, std::string(source) + ": Trend.Value applies to simple trends only");
    c.trend.known_constant = *trend_value;
  }
  if (trend_degree) {
    if (c.trend.kind == TrendKind::Polynomial || (!trend_type && *trend_degree > 0))
      c.trend = TrendSpec::polynomial(*trend_degree);
    else if (!(c.trend.kind == TrendKind::Ordinary && *trend_degree == 0))
      throw Error(ErrorCode::Config, std::string(source) + ": Trend.Degree applies to polynomial trends");
  } else if (trend_type && lower(*trend_type) == "polynomial") {
    throw Error(ErrorCode::Config, std::string(source) + ": Trend.Type polynomial needs Trend.Degree");
  }
  if (max_iter) {
    c.optim.ga.max_generations = *max_iter;
    c.optim.bfgs.max_iter = *max_iter;
  }
  if (pop) c.optim.ga.pop_size = *pop;
  return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error&) {
    throw Error(ErrorCode::Config, "cannot open config file '" + path.string() + "'");
  }
  return parse_config(text, path.parent_path(), path.string());
}

}  // namespace krig
