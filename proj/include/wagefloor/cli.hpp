#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "wagefloor/experiments.hpp"
#include "wagefloor/simulation.hpp"

namespace wagefloor {

// Exit codes, also listed in --help: 0 success, 64 usage error, 65 bad config
// contents, 66 missing input file, 70 solver failure, 74 output write failure.
enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 64,
  exit_config = 65,
  exit_noinput = 66,
  exit_solver = 70,
  exit_io = 74,
};

namespace detail {

inline void apply_thread_cap(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

// --threads beats WAGEFLOOR_THREADS beats the OpenMP default
inline void setup_threads(int threads_flag) {
  if (threads_flag > 0) {
    apply_thread_cap(threads_flag);
    return;
  }
  if (const char* env = std::getenv("WAGEFLOOR_THREADS")) {
    try {
      apply_thread_cap(std::stoi(env));
    } catch (const std::exception&) {
      throw std::invalid_argument("WAGEFLOOR_THREADS must be a positive integer, got '" +
                                  std::string(env) + "'");
    }
  }
}

inline Parameters load_params(const std::string& config_path) {
  if (config_path.empty()) return Parameters{};
  if (!std::filesystem::exists(config_path))
    throw io_error("config file not found: " + config_path);
  return load_config(config_path);
}

inline std::string label_for_floor(double w_min) {
  for (const auto& [name, wm] : canonical_scenarios())
    if (w_min == wm) return name;
  return "custom";
}

inline void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory " + dir + ": " + ec.message());
}

inline void write_scenario_summary(const ScenarioResult& s, const std::string& out_dir) {
  CsvTable t({"indicator", "value"});
  t.add("u_rate_low_pct", 100.0 * s.steady.u_rate_low);
  t.add("u_rate_high_pct", 100.0 * s.steady.u_rate_high);
  t.add("j2j_rate_pct", 100.0 * s.steady.j2j_rate);
  t.add("outer_iterations", static_cast<long>(s.eq.iterations));
  t.add("outer_residual", s.eq.residual);
  write_csv(t, out_dir + "/indicators.csv");
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "Directed-search labor market with savings: equilibrium solver, wage floor\n"
      "experiments, and panel simulation.\n\n"
      "Exit codes: 0 success, 64 usage error, 65 invalid config contents,\n"
      "66 missing input file, 70 solver failure, 74 output write failure."};
  app.require_subcommand(1);

  std::string config_path;
  int threads = 0;
  bool verbose = false;
  app.add_option("--threads", threads, "Cap worker threads (default: WAGEFLOOR_THREADS or all cores)");
  app.add_flag("--verbose", verbose, "Stream per-iteration residuals to stderr");

  auto* solve = app.add_subcommand("solve", "Solve one scenario and export its figure data");
  std::string solve_out = "out";
  solve->add_option("--config", config_path, "Config file (key = value lines); defaults when omitted");
  solve->add_option("--out", solve_out, "Output directory");

  auto* experiment = app.add_subcommand("experiment", "Run baseline, nonbinding, and binding floors");
  std::string exp_out = "out";
  experiment->add_option("--config", config_path, "Config file; w_min is overridden per scenario");
  experiment->add_option("--out", exp_out, "Output directory");

  auto* simulate = app.add_subcommand("simulate", "Panel simulation cross-check of one scenario");
  std::string sim_out = "out";
  std::uint64_t seed = 12345;
  long workers = 200000, periods = 4000;
  int shards = 64;
  simulate->add_option("--config", config_path, "Config file; defaults when omitted");
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--workers", workers, "Workers in the panel");
  simulate->add_option("--periods", periods, "Periods per worker (first half is burn-in)");
  simulate->add_option("--shards", shards, "Independent worker shards (part of the seed contract)");
  simulate->add_option("--out", sim_out, "Output directory");

  auto* figures = app.add_subcommand("export-figures", "Export every figure panel CSV");
  std::string fig_out = "out";
  figures->add_option("--config", config_path, "Config file; w_min is overridden per scenario");
  figures->add_option("--out", fig_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }

  std::ostream* log = verbose ? &std::cerr : nullptr;

  try {
    detail::setup_threads(threads);

    if (*solve) {
      const Parameters p = detail::load_params(config_path);
      detail::ensure_out_dir(solve_out);
      const std::string label = detail::label_for_floor(p.w_min);
      const ScenarioResult s = run_scenario(p, p.w_min, label, log);
      detail::write_scenario_summary(s, solve_out);
      export_figure_data(s, solve_out);
      save_config(p, solve_out + "/config.cfg");
      std::cout << "scenario " << label << ": u_low " << 100.0 * s.steady.u_rate_low
                << "%  u_high " << 100.0 * s.steady.u_rate_high << "%  j2j "
                << 100.0 * s.steady.j2j_rate << "%\n";
    } else if (*experiment || *figures) {
      const Parameters p = detail::load_params(config_path);
      const std::string out_dir = *experiment ? exp_out : fig_out;
      detail::ensure_out_dir(out_dir);
      std::vector<ScenarioResult> runs;
      for (const auto& [label, wm] : canonical_scenarios()) {
        if (log) *log << "--- scenario " << label << " (w_min = " << wm << ")\n";
        runs.push_back(run_scenario(p, wm, label, log));
      }
      const ComparisonTable table =
          compare_scenarios(runs[0], {runs.begin() + 1, runs.end()});
      write_indicator_table(table, out_dir + "/table3.csv");
      if (*figures) {
        export_figure_data(runs[0], out_dir);
        export_figure_data(table, runs[0].params, out_dir);
      }
      save_config(p, out_dir + "/config.cfg");
      for (size_t i = 0; i < runs.size(); ++i)
        std::cout << table.labels[i] << ": u_low " << 100.0 * table.u_rate_low[i] << "%  u_high "
                  << 100.0 * table.u_rate_high[i] << "%  j2j " << 100.0 * table.j2j_rate[i]
                  << "%\n";
    } else if (*simulate) {
      const Parameters p = detail::load_params(config_path);
      detail::ensure_out_dir(sim_out);
      const std::string label = detail::label_for_floor(p.w_min);
      const ScenarioResult s = run_scenario(p, p.w_min, label, log);
      const Grids grids = build_grids(p);
      const MarkovChain chain = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
      const PanelResult panel =
          simulate_panel(s.eq, p, grids, chain, seed, workers, periods, shards);
      CsvTable t({"indicator", "matrix", "panel", "panel_se"});
      t.add("u_rate_low", s.steady.u_rate_low, panel.steady.u_rate_low, panel.se_u_low);
      t.add("u_rate_high", s.steady.u_rate_high, panel.steady.u_rate_high, panel.se_u_high);
      t.add("j2j_rate", s.steady.j2j_rate, panel.steady.j2j_rate, panel.se_j2j);
      write_csv(t, sim_out + "/simulate.csv");
      std::cout << "panel (" << workers << " x " << periods << ", seed " << seed << "): u_low "
                << 100.0 * panel.steady.u_rate_low << "%  u_high "
                << 100.0 * panel.steady.u_rate_high << "%  j2j " << 100.0 * panel.steady.j2j_rate
                << "%\n";
    }
  } catch (const io_error& e) {
    // missing inputs and failed writes carry different codes
    const std::string what = e.what();
    std::cerr << "error: " << what << "\n";
    return what.find("not found") != std::string::npos ? exit_noinput : exit_io;
  } catch (const solver_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_solver;
  } catch (const std::exception& e) {
    // config parse/validation problems and bad argument combinations
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  }
  return exit_ok;
}

}  // namespace wagefloor
