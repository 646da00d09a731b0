#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wagefloor/csv.hpp"
#include "wagefloor/distribution.hpp"
#include "wagefloor/equilibrium.hpp"
#include "wagefloor/grids.hpp"
#include "wagefloor/markov.hpp"
#include "wagefloor/params.hpp"

namespace wagefloor {

// One solved economy: equilibrium plus its stationary cross-section.
struct ScenarioResult {
  std::string label;  // baseline | nonbinding | binding | custom
  Parameters params;
  Equilibrium eq;
  SteadyState steady;
};

// Indicators side by side plus base-minus-alternative saving policies.
// labels[0] is the base; entry i of the diff arrays belongs to labels[i+1].
// Saving differences are in wealth units on the shared wealth grid.
struct ComparisonTable {
  std::vector<std::string> labels;
  std::vector<double> u_rate_low, u_rate_high, j2j_rate;          // one per label
  std::vector<std::vector<double>> earnings_hist, wealth_hist;    // one per label
  std::vector<std::vector<double>> saving_diff_u;                 // per alt, (eta, a) flat
  std::vector<std::vector<double>> saving_diff_e;                 // per alt, (eta, w, a) flat
  int n_eta = 0, n_w = 0, n_a = 0;
};

inline const std::vector<std::pair<std::string, double>>& canonical_scenarios() {
  static const std::vector<std::pair<std::string, double>> c = {
      {"baseline", 0.0}, {"nonbinding", 0.1}, {"binding", 0.7}};
  return c;
}

// Solve the equilibrium and its stationary distribution at the given floor.
// The wage grid is shared across floors; the floor only changes which nodes
// accept postings, so scenario outputs are directly comparable node by node.
inline ScenarioResult run_scenario(const Parameters& base, double w_min, const std::string& label,
                                   std::ostream* log = nullptr) {
  bool canonical = false;
  for (const auto& [name, wm] : canonical_scenarios())
    if (label == name) {
      canonical = true;
      if (w_min != wm)
        throw std::invalid_argument("scenario '" + label + "' requires w_min = " + format_double(wm) +
                                    ", got " + format_double(w_min));
    }
  if (!canonical && label != "custom")
    throw std::invalid_argument("unknown scenario label '" + label +
                                "' (use baseline, nonbinding, binding, or custom)");
  if (!(w_min >= 0.0 && w_min <= base.w_max))
    throw std::invalid_argument("scenario w_min must lie in [0, w_max]");

  ScenarioResult out;
  out.label = label;
  out.params = base;
  out.params.w_min = w_min;
  validate(out.params);

  const Parameters& p = out.params;
  const Grids grids = build_grids(p);
  const MarkovChain chain = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
  out.eq = solve_equilibrium(p, log);

  const SparseMatrix P = build_transition_matrix(out.eq, p, grids, chain);
  const StateIndex st{out.eq.ws.n_eta, out.eq.ws.n_w, out.eq.ws.n_a};
  const std::vector<double> start = bottom_wealth_start(st);
  const std::vector<double> psi = stationary_distribution(P, p.tol_dist, p.max_iter_dist, &start);
  out.steady = compute_indicators(psi, out.eq, p, grids);
  return out;
}

// Pack indicators and base-minus-alt saving policies onto the shared grids.
inline ComparisonTable compare_scenarios(const ScenarioResult& base,
                                         const std::vector<ScenarioResult>& alts) {
  const WorkerSolution& bw = base.eq.ws;
  ComparisonTable t;
  t.n_eta = bw.n_eta;
  t.n_w = bw.n_w;
  t.n_a = bw.n_a;

  const Grids grids = build_grids(base.params);
  auto push = [&](const ScenarioResult& s) {
    t.labels.push_back(s.label);
    t.u_rate_low.push_back(s.steady.u_rate_low);
    t.u_rate_high.push_back(s.steady.u_rate_high);
    t.j2j_rate.push_back(s.steady.j2j_rate);
    t.earnings_hist.push_back(s.steady.earnings_hist);
    t.wealth_hist.push_back(s.steady.wealth_hist);
  };
  push(base);

  for (const ScenarioResult& alt : alts) {
    const WorkerSolution& aw = alt.eq.ws;
    if (aw.n_eta != bw.n_eta || aw.n_w != bw.n_w || aw.n_a != bw.n_a)
      throw std::logic_error("compare_scenarios: scenarios solved on different grids");
    push(alt);
    std::vector<double> du(bw.size_u()), de(bw.size_e());
    for (int i = 0; i < bw.size_u(); ++i)
      du[i] = grids.wealth[bw.savings_u[i]] - grids.wealth[aw.savings_u[i]];
    for (int i = 0; i < bw.size_e(); ++i)
      de[i] = grids.wealth[bw.savings_e[i]] - grids.wealth[aw.savings_e[i]];
    t.saving_diff_u.push_back(std::move(du));
    t.saving_diff_e.push_back(std::move(de));
  }
  return t;
}

namespace detail {

// All CSV indices are 1-based, matching the slice labels in the docs.
inline void scenario_tables(const ScenarioResult& s,
                            std::vector<std::pair<std::string, CsvTable>>& out) {
  const WorkerSolution& ws = s.eq.ws;
  const MarketSide& mk = s.eq.market;
  const Grids grids = build_grids(s.params);
  const int NE = ws.n_eta, NW = ws.n_w, NA = ws.n_a;
  const int lo = 0, hi = NE - 1;

  {  // search policy: target wage against post-savings wealth
    CsvTable t({"eta", "wealth_index", "wealth", "target_wage_index", "target_wage"});
    for (int eta = 0; eta < NE; ++eta)
      for (int ia = 0; ia < NA; ++ia) {
        const int wt = ws.target_wage_u[ws.idx_u(eta, ia)];
        t.add(eta + 1, ia + 1, grids.wealth[ia], wt + 1, grids.wage[wt]);
      }
    out.emplace_back("fig1a_search_unemployed.csv", std::move(t));
  }
  for (auto [eta, name] : {std::pair<int, const char*>{lo, "fig1b_search_employed_low.csv"},
                           {hi, "fig1c_search_employed_high.csv"}}) {
    CsvTable t({"wage_index", "wage", "wealth_index", "wealth", "target_wage_index", "target_wage"});
    for (int w = 0; w < NW; ++w)
      for (int ia = 0; ia < NA; ++ia) {
        const int wt = ws.target_wage_e[ws.idx_e(eta, w, ia)];
        t.add(w + 1, grids.wage[w], ia + 1, grids.wealth[ia], wt + 1, grids.wage[wt]);
      }
    out.emplace_back(name, std::move(t));
  }

  {  // saving policy: next wealth minus current wealth
    CsvTable t({"eta", "wealth_index", "wealth", "saving"});
    for (int eta = 0; eta < NE; ++eta)
      for (int ia = 0; ia < NA; ++ia)
        t.add(eta + 1, ia + 1, grids.wealth[ia],
              grids.wealth[ws.savings_u[ws.idx_u(eta, ia)]] - grids.wealth[ia]);
    out.emplace_back("fig2a_saving_unemployed.csv", std::move(t));
  }
  for (auto [eta, name] : {std::pair<int, const char*>{lo, "fig2b_saving_employed_low.csv"},
                           {hi, "fig2c_saving_employed_high.csv"}}) {
    CsvTable t({"wage_index", "wage", "wealth_index", "wealth", "saving"});
    for (int w = 0; w < NW; ++w)
      for (int ia = 0; ia < NA; ++ia)
        t.add(w + 1, grids.wage[w], ia + 1, grids.wealth[ia],
              grids.wealth[ws.savings_e[ws.idx_e(eta, w, ia)]] - grids.wealth[ia]);
    out.emplace_back(name, std::move(t));
  }

  {  // consumption policy
    CsvTable t({"eta", "wealth_index", "wealth", "consumption"});
    for (int eta = 0; eta < NE; ++eta)
      for (int ia = 0; ia < NA; ++ia)
        t.add(eta + 1, ia + 1, grids.wealth[ia], ws.consumption_u[ws.idx_u(eta, ia)]);
    out.emplace_back("fig3a_consumption_unemployed.csv", std::move(t));
  }
  for (auto [eta, name] : {std::pair<int, const char*>{lo, "fig3b_consumption_employed_low.csv"},
                           {hi, "fig3c_consumption_employed_high.csv"}}) {
    CsvTable t({"wage_index", "wage", "wealth_index", "wealth", "consumption"});
    for (int w = 0; w < NW; ++w)
      for (int ia = 0; ia < NA; ++ia)
        t.add(w + 1, grids.wage[w], ia + 1, grids.wealth[ia], ws.consumption_e[ws.idx_e(eta, w, ia)]);
    out.emplace_back(name, std::move(t));
  }

  {  // stationary histograms; earnings bin 1 collects the unemployed at zero
    CsvTable t({"bin_index", "earnings", "mass"});
    for (int b = 0; b <= NW; ++b)
      t.add(b + 1, b == 0 ? 0.0 : grids.wage[b - 1], s.steady.earnings_hist[b]);
    out.emplace_back("fig4a_earnings.csv", std::move(t));
  }
  {
    CsvTable t({"wealth_index", "wealth", "mass"});
    for (int ia = 0; ia < NA; ++ia) t.add(ia + 1, grids.wealth[ia], s.steady.wealth_hist[ia]);
    out.emplace_back("fig4b_wealth.csv", std::move(t));
  }

  // value and tightness surfaces: full surface against wealth, plus
  // wage-profile slices at the bottom, 12th, and top wealth nodes
  const int slice_mid = NA >= 12 ? 11 : NA / 2;
  const int slices[3] = {0, slice_mid, NA - 1};
  auto surface = [&](const std::vector<double>& v, int eta, const char* col) {
    CsvTable t({"wage_index", "wage", "wealth_index", "wealth", col});
    for (int w = 0; w < NW; ++w)
      for (int ia = 0; ia < NA; ++ia)
        t.add(w + 1, grids.wage[w], ia + 1, grids.wealth[ia], v[mk.idx(eta, w, ia)]);
    return t;
  };
  auto profile = [&](const std::vector<double>& v, int eta, const char* col) {
    CsvTable t({"wealth_index", "wealth", "wage_index", "wage", col});
    for (int si = 0; si < 3; ++si) {
      const int ia = slices[si];
      for (int w = 0; w < NW; ++w)
        t.add(ia + 1, grids.wealth[ia], w + 1, grids.wage[w], v[mk.idx(eta, w, ia)]);
    }
    return t;
  };
  out.emplace_back("fig5a_firm_value_low_by_wealth.csv", surface(mk.j, lo, "firm_value"));
  out.emplace_back("fig5b_firm_value_high_by_wealth.csv", surface(mk.j, hi, "firm_value"));
  out.emplace_back("fig5c_firm_value_low_by_wage.csv", profile(mk.j, lo, "firm_value"));
  out.emplace_back("fig5d_firm_value_high_by_wage.csv", profile(mk.j, hi, "firm_value"));
  out.emplace_back("fig6a_tightness_low_by_wealth.csv", surface(mk.theta, lo, "tightness"));
  out.emplace_back("fig6b_tightness_high_by_wealth.csv", surface(mk.theta, hi, "tightness"));
  out.emplace_back("fig6c_tightness_low_by_wage.csv", profile(mk.theta, lo, "tightness"));
  out.emplace_back("fig6d_tightness_high_by_wage.csv", profile(mk.theta, hi, "tightness"));
}

inline void comparison_tables(const ComparisonTable& c, const Parameters& base_params,
                              std::vector<std::pair<std::string, CsvTable>>& out) {
  const Grids grids = build_grids(base_params);
  const int NE = c.n_eta, NW = c.n_w, NA = c.n_a;
  const int lo = 0, hi = NE - 1;

  auto find_label = [&](const std::string& want) {
    for (size_t i = 0; i < c.labels.size(); ++i)
      if (c.labels[i] == want) return static_cast<int>(i);
    return -1;
  };
  const int ib = find_label("baseline"), in = find_label("nonbinding"), ibi = find_label("binding");
  if (ib != 0 || in < 0 || ibi < 0)
    throw std::invalid_argument(
        "figure export needs the canonical comparison: baseline first, then nonbinding and binding");

  auto overlay_hist = [&](int alt, const char* a_name, const char* b_name) {
    CsvTable ta({"scenario", "bin_index", "earnings", "mass"});
    for (int which : {ib, alt})
      for (int b = 0; b <= NW; ++b)
        ta.add(c.labels[which], b + 1, b == 0 ? 0.0 : grids.wage[b - 1], c.earnings_hist[which][b]);
    out.emplace_back(a_name, std::move(ta));
    CsvTable tw({"scenario", "wealth_index", "wealth", "mass"});
    for (int which : {ib, alt})
      for (int ia = 0; ia < NA; ++ia)
        tw.add(c.labels[which], ia + 1, grids.wealth[ia], c.wealth_hist[which][ia]);
    out.emplace_back(b_name, std::move(tw));
  };
  overlay_hist(in, "fig7a_earnings_nonbinding.csv", "fig7b_wealth_nonbinding.csv");
  overlay_hist(ibi, "fig8a_earnings_binding.csv", "fig8b_wealth_binding.csv");

  // saving policy differences, baseline minus binding
  const std::vector<double>& du = c.saving_diff_u[ibi - 1];
  const std::vector<double>& de = c.saving_diff_e[ibi - 1];
  {
    CsvTable t({"eta", "wealth_index", "wealth", "saving_difference"});
    for (int eta = 0; eta < NE; ++eta)
      for (int ia = 0; ia < NA; ++ia)
        t.add(eta + 1, ia + 1, grids.wealth[ia], du[eta * NA + ia]);
    out.emplace_back("fig9a_saving_diff_unemployed.csv", std::move(t));
  }
  for (auto [eta, name] : {std::pair<int, const char*>{lo, "fig9b_saving_diff_employed_low.csv"},
                           {hi, "fig9c_saving_diff_employed_high.csv"}}) {
    CsvTable t({"wage_index", "wage", "wealth_index", "wealth", "saving_difference"});
    for (int w = 0; w < NW; ++w)
      for (int ia = 0; ia < NA; ++ia)
        t.add(w + 1, grids.wage[w], ia + 1, grids.wealth[ia], de[(eta * NW + w) * NA + ia]);
    out.emplace_back(name, std::move(t));
  }
}

inline void write_tables(std::vector<std::pair<std::string, CsvTable>>& tables,
                         const std::string& out_dir) {
  // assemble-then-write: validation errors surface before any file is touched,
  // and each write is itself temp-and-rename
  for (auto& [name, table] : tables) write_csv(table, out_dir + "/" + name);
}

}  // namespace detail

// One CSV per figure panel for a single solved scenario (19 files).
inline std::vector<std::string> export_figure_data(const ScenarioResult& s,
                                                   const std::string& out_dir) {
  if (s.label.empty()) throw std::invalid_argument("export_figure_data: empty scenario label");
  std::vector<std::pair<std::string, CsvTable>> tables;
  detail::scenario_tables(s, tables);
  detail::write_tables(tables, out_dir);
  std::vector<std::string> names;
  for (auto& [name, t] : tables) names.push_back(name);
  return names;
}

// Comparison panels: histogram overlays and saving-policy differences
// (7 files). Requires the canonical baseline/nonbinding/binding table.
inline std::vector<std::string> export_figure_data(const ComparisonTable& c,
                                                   const Parameters& base_params,
                                                   const std::string& out_dir) {
  std::vector<std::pair<std::string, CsvTable>> tables;
  detail::comparison_tables(c, base_params, tables);
  detail::write_tables(tables, out_dir);
  std::vector<std::string> names;
  for (auto& [name, t] : tables) names.push_back(name);
  return names;
}

// Indicator rows against scenario columns, rates in percent.
inline void write_indicator_table(const ComparisonTable& c, const std::string& path) {
  std::vector<std::string> header = {"indicator"};
  for (const std::string& l : c.labels) header.push_back(l);
  CsvTable t(std::move(header));
  auto row = [&](const char* name, const std::vector<double>& v) {
    std::string joined = name;
    for (double x : v) {
      joined += ',';
      joined += format_double(100.0 * x);
    }
    t.lines.push_back(std::move(joined));
  };
  row("u_rate_low_pct", c.u_rate_low);
  row("u_rate_high_pct", c.u_rate_high);
  row("j2j_rate_pct", c.j2j_rate);
  write_csv(t, path);
}

}  // namespace wagefloor
