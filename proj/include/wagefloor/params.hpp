#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wagefloor/format.hpp"

namespace wagefloor {

// All model constants, grid sizes, and solver settings. Time unit is one month.
struct Parameters {
  // preferences and asset return
  double beta = 0.996;        // discount factor
  double r = 0.00327;         // net asset return
  double sigma = 2.0;         // relative risk aversion

  // labor market
  double delta = 0.00633;     // exogenous separation probability
  double lambda_e = 0.0346;   // employed search opportunity probability
  double gamma = 0.5;         // matching elasticity parameter
  double k = 0.77;            // vacancy posting cost
  double y = 1.0;             // output scale
  double y_min = 0.05;        // home production

  // productivity process (log AR(1))
  double rho = 0.99;
  double sigma_eps = 0.05;
  int n_eta = 2;              // discretized productivity states

  // grids
  double a_min = -5.0;        // borrowing limit
  double a_max = 700.0;       // wealth ceiling
  double w_min = 0.0;         // minimum wage (admissibility floor)
  double w_max = 1.4254;      // wage ceiling
  int n_a = 141;
  int n_w = 20;
  std::string wealth_grid = "exponential";  // "exponential" | "uniform"
  double grid_knee = 30.0;        // exponential scheme: end of the finely spaced segment
  double grid_dense_share = 0.85; // share of wealth points in [a_min, grid_knee]

  // tolerances (sup-norm except tol_dist, which is L1) and iteration caps
  double tol_vfi = 1e-8;
  double tol_firm = 1e-8;
  double tol_outer = 1e-6;
  double tol_dist = 1e-12;
  long max_iter_vfi = 10000;
  long max_iter_firm = 10000;
  long max_iter_outer = 500;
  long max_iter_dist = 1000000;

  // algorithm knobs
  int howard_steps = 100;   // policy-evaluation sweeps between maximization sweeps; 0 = plain VFI
  double damping_j = 1.0;   // outer-loop damping on firm values (1 = undamped)
};

inline void validate(const Parameters& p) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw std::invalid_argument("invalid parameter " + key + ": " + why);
  };
  if (!(p.beta > 0.0 && p.beta < 1.0)) fail("beta", "must be in (0,1)");
  if (!(p.r > -1.0) || !std::isfinite(p.r)) fail("r", "must be finite and > -1");
  if (!(p.beta * (1.0 + p.r) < 1.0)) fail("r", "beta*(1+r) must be < 1 for bounded wealth");
  if (!(p.sigma > 0.0)) fail("sigma", "must be > 0");
  if (!(p.delta > 0.0 && p.delta <= 1.0)) fail("delta", "must be in (0,1]");
  if (!(p.lambda_e >= 0.0 && p.lambda_e <= 1.0)) fail("lambda_e", "must be in [0,1]");
  if (!(p.gamma > 0.0)) fail("gamma", "must be > 0");
  if (!(p.k > 0.0)) fail("k", "must be > 0");
  if (!(p.y > 0.0)) fail("y", "must be > 0");
  if (!(p.y_min > 0.0)) fail("y_min", "must be > 0");
  if (!(std::abs(p.rho) < 1.0)) fail("rho", "must satisfy |rho| < 1");
  if (!(p.sigma_eps > 0.0)) fail("sigma_eps", "must be > 0");
  if (p.n_eta < 2) fail("n_eta", "must be >= 2");
  if (!(p.a_min < p.a_max)) fail("a_min", "must be < a_max");
  if (!(p.w_min >= 0.0)) fail("w_min", "must be >= 0");
  if (!(p.w_max > 0.0)) fail("w_max", "must be > 0");
  if (!(p.w_min <= p.w_max)) fail("w_min", "must be <= w_max");
  if (p.n_a < 2) fail("n_a", "must be >= 2");
  if (p.n_w < 2) fail("n_w", "must be >= 2");
  if (p.wealth_grid != "uniform" && p.wealth_grid != "exponential")
    fail("wealth_grid", "must be 'uniform' or 'exponential'");
  if (p.wealth_grid == "exponential" && !(p.grid_knee > p.a_min && p.grid_knee < p.a_max))
    fail("grid_knee", "must lie strictly between a_min and a_max");
  if (!(p.grid_dense_share > 0.0 && p.grid_dense_share < 1.0))
    fail("grid_dense_share", "must be in (0,1)");
  // An unemployed worker at the borrowing limit must afford positive consumption.
  if (!(p.y_min + p.a_min - p.a_min / (1.0 + p.r) > 0.0))
    fail("a_min", "y_min + a_min - a_min/(1+r) must be > 0");
  if (!(p.tol_vfi > 0.0)) fail("tol_vfi", "must be > 0");
  if (!(p.tol_firm > 0.0)) fail("tol_firm", "must be > 0");
  if (!(p.tol_outer > 0.0)) fail("tol_outer", "must be > 0");
  if (!(p.tol_dist > 0.0)) fail("tol_dist", "must be > 0");
  if (p.max_iter_vfi < 1) fail("max_iter_vfi", "must be >= 1");
  if (p.max_iter_firm < 1) fail("max_iter_firm", "must be >= 1");
  if (p.max_iter_outer < 1) fail("max_iter_outer", "must be >= 1");
  if (p.max_iter_dist < 1) fail("max_iter_dist", "must be >= 1");
  if (p.howard_steps < 0) fail("howard_steps", "must be >= 0");
  if (!(p.damping_j > 0.0 && p.damping_j <= 1.0)) fail("damping_j", "must be in (0,1]");
}

namespace detail {

struct ParamField {
  std::function<void(Parameters&, std::string_view, const std::string&)> set;
  std::function<std::string(const Parameters&)> get;
};

inline const std::vector<std::pair<std::string, ParamField>>& param_fields() {
  static const std::vector<std::pair<std::string, ParamField>> fields = [] {
    std::vector<std::pair<std::string, ParamField>> f;
    auto add_d = [&f](const char* name, double Parameters::*m) {
      f.push_back({name, {[m](Parameters& p, std::string_view v, const std::string& key) { p.*m = parse_double(v, key); },
                          [m](const Parameters& p) { return format_double(p.*m); }}});
    };
    auto add_i = [&f](const char* name, int Parameters::*m) {
      f.push_back({name, {[m](Parameters& p, std::string_view v, const std::string& key) { p.*m = static_cast<int>(parse_long(v, key)); },
                          [m](const Parameters& p) { return format_long(p.*m); }}});
    };
    auto add_l = [&f](const char* name, long Parameters::*m) {
      f.push_back({name, {[m](Parameters& p, std::string_view v, const std::string& key) { p.*m = parse_long(v, key); },
                          [m](const Parameters& p) { return format_long(p.*m); }}});
    };
    auto add_s = [&f](const char* name, std::string Parameters::*m) {
      f.push_back({name, {[m](Parameters& p, std::string_view v, const std::string&) { p.*m = std::string(v); },
                          [m](const Parameters& p) { return p.*m; }}});
    };
    add_d("beta", &Parameters::beta);
    add_d("r", &Parameters::r);
    add_d("sigma", &Parameters::sigma);
    add_d("delta", &Parameters::delta);
    add_d("lambda_e", &Parameters::lambda_e);
    add_d("gamma", &Parameters::gamma);
    add_d("k", &Parameters::k);
    add_d("y", &Parameters::y);
    add_d("y_min", &Parameters::y_min);
    add_d("rho", &Parameters::rho);
    add_d("sigma_eps", &Parameters::sigma_eps);
    add_i("n_eta", &Parameters::n_eta);
    add_d("a_min", &Parameters::a_min);
    add_d("a_max", &Parameters::a_max);
    add_d("w_min", &Parameters::w_min);
    add_d("w_max", &Parameters::w_max);
    add_i("n_a", &Parameters::n_a);
    add_i("n_w", &Parameters::n_w);
    add_s("wealth_grid", &Parameters::wealth_grid);
    add_d("grid_knee", &Parameters::grid_knee);
    add_d("grid_dense_share", &Parameters::grid_dense_share);
    add_d("tol_vfi", &Parameters::tol_vfi);
    add_d("tol_firm", &Parameters::tol_firm);
    add_d("tol_outer", &Parameters::tol_outer);
    add_d("tol_dist", &Parameters::tol_dist);
    add_l("max_iter_vfi", &Parameters::max_iter_vfi);
    add_l("max_iter_firm", &Parameters::max_iter_firm);
    add_l("max_iter_outer", &Parameters::max_iter_outer);
    add_l("max_iter_dist", &Parameters::max_iter_dist);
    add_i("howard_steps", &Parameters::howard_steps);
    add_d("damping_j", &Parameters::damping_j);
    return f;
  }();
  return fields;
}

inline std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

// Flat "key = value" lines; '#' starts a comment; missing keys keep defaults.
inline Parameters parse_config(std::istream& in, const std::string& source) {
  Parameters p;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = detail::trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(source + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + t + "'");
    std::string key = detail::trim(t.substr(0, eq));
    std::string val = detail::trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::runtime_error(source + ":" + std::to_string(lineno) + ": empty key or value");
    bool found = false;
    for (const auto& [name, field] : detail::param_fields()) {
      if (name == key) {
        field.set(p, val, key);
        found = true;
        break;
      }
    }
    if (!found)
      throw std::runtime_error(source + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  validate(p);
  return p;
}

inline Parameters load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  return parse_config(in, path);
}

inline void save_config(const Parameters& p, std::ostream& out) {
  for (const auto& [name, field] : detail::param_fields())
    out << name << " = " << field.get(p) << "\n";
}

inline void save_config(const Parameters& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  save_config(p, out);
}

}  // namespace wagefloor
