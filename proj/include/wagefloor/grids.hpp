#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wagefloor/params.hpp"

namespace wagefloor {

struct Grids {
  std::vector<double> wealth;        // ascending, wealth[0] = a_min, wealth[n_a-1] = a_max
  std::vector<double> wage;          // ascending, wage[0] = 0, wage[n_w-1] = w_max
  std::vector<char> admissible_wage; // posting allowed at wage[j]; see build_grids
};

namespace detail {

inline std::vector<double> uniform_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  g.front() = lo;
  g.back() = hi;
  return g;
}

// Dense uniform segment [a_min, knee], then geometric step growth up to a_max.
// Step sizes stay below feasible per-period saving where the mass of workers
// lives; the stretched top keeps the ceiling far away at the stated point count.
inline std::vector<double> dense_bottom_grid(const Parameters& p) {
  const int n = p.n_a;
  int n_dense = static_cast<int>(std::lround(p.grid_dense_share * n));
  if (n_dense < 2) n_dense = 2;
  if (n_dense > n) n_dense = n;
  const int n_top = n - n_dense;  // points strictly above the knee
  if (n_top == 0) return uniform_grid(p.a_min, p.a_max, n);

  std::vector<double> g(n);
  const double h = (p.grid_knee - p.a_min) / (n_dense - 1);
  for (int i = 0; i < n_dense; ++i) g[i] = p.a_min + h * i;
  g[0] = p.a_min;
  g[n_dense - 1] = p.grid_knee;

  const double span = p.a_max - p.grid_knee;
  if (n_top == 1 || span / n_top <= h) {
    // top segment needs no stretching
    for (int j = 1; j <= n_top; ++j) g[n_dense - 1 + j] = p.grid_knee + span * static_cast<double>(j) / n_top;
  } else {
    // find growth ratio rho > 1 with first top step = h*rho (continuous step growth)
    auto first_step = [&](double rho) {
      return span * (rho - 1.0) / (std::pow(rho, n_top) - 1.0) - h * rho;
    };
    double lo = 1.0 + 1e-12, hi = 2.0;
    while (first_step(hi) > 0.0) hi *= 2.0;  // bracket: first_step(lo) > 0 since span/n_top > h
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (first_step(mid) > 0.0 ? lo : hi) = mid;
    }
    const double rho = 0.5 * (lo + hi);
    const double denom = std::pow(rho, n_top) - 1.0;
    for (int j = 1; j <= n_top; ++j)
      g[n_dense - 1 + j] = p.grid_knee + span * (std::pow(rho, j) - 1.0) / denom;
  }
  g[n - 1] = p.a_max;
  return g;
}

}  // namespace detail

inline Grids build_grids(const Parameters& p) {
  Grids g;
  g.wage.resize(p.n_w);
  for (int j = 0; j < p.n_w; ++j) g.wage[j] = p.w_max * static_cast<double>(j) / (p.n_w - 1);
  g.wage.front() = 0.0;
  g.wage.back() = p.w_max;

  g.wealth = (p.wealth_grid == "uniform") ? detail::uniform_grid(p.a_min, p.a_max, p.n_a)
                                          : detail::dense_bottom_grid(p);

  // Floor rule on the discrete wage menu: the floor first snaps up to the
  // nearest grid node, and that node itself is barred; a posted wage must
  // strictly clear the snapped floor. w_min <= 0 disables the floor entirely.
  g.admissible_wage.assign(p.n_w, 1);
  if (p.w_min > 0.0) {
    double snapped = g.wage.back();
    for (int j = 0; j < p.n_w; ++j)
      if (g.wage[j] >= p.w_min - 1e-12) {
        snapped = g.wage[j];
        break;
      }
    for (int j = 0; j < p.n_w; ++j) g.admissible_wage[j] = (g.wage[j] > snapped + 1e-12) ? 1 : 0;
  }

  for (int i = 1; i < p.n_a; ++i)
    if (!(g.wealth[i] > g.wealth[i - 1])) throw std::logic_error("wealth grid not strictly increasing");
  for (int j = 1; j < p.n_w; ++j)
    if (!(g.wage[j] > g.wage[j - 1])) throw std::logic_error("wage grid not strictly increasing");
  return g;
}

inline int first_admissible_wage(const Grids& g) {
  for (int j = 0; j < static_cast<int>(g.wage.size()); ++j)
    if (g.admissible_wage[j]) return j;
  return -1;
}

}  // namespace wagefloor
