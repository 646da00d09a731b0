#pragma once

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wagefloor/errors.hpp"
#include "wagefloor/firm.hpp"
#include "wagefloor/grids.hpp"
#include "wagefloor/household.hpp"
#include "wagefloor/markov.hpp"
#include "wagefloor/params.hpp"

namespace wagefloor {

// A mutually consistent worker solution and market side. ws is optimal against
// market.theta; market.theta satisfies free entry against market.j exactly;
// market.j is a firm fixed point against the previous iterate's policies,
// within residual of the one against ws.
struct Equilibrium {
  WorkerSolution ws;
  MarketSide market;
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

inline void check_finite(const std::vector<double>& v, const char* what, int iteration) {
  for (size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) {
      std::ostringstream os;
      os << "non-finite " << what << " at outer iteration " << iteration << ", flat index " << i
         << " (value " << v[i] << ")";
      throw solver_error(os.str());
    }
}

}  // namespace detail

// Outer fixed point: guess firm values, derive tightness by free entry, solve
// the household against it, re-solve firm values against the household
// policies, and stop when firm values move less than tol_outer in sup-norm.
// Deterministic for fixed Parameters at any thread count.
inline Equilibrium solve_equilibrium(const Parameters& p, std::ostream* log = nullptr) {
  const MarkovChain chain = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
  const Grids grids = build_grids(p);
  const int NE = chain.n, NW = p.n_w, NA = p.n_a;

  // initial guess: flow-profit perpetuity, clamped at 0
  std::vector<double> j(NE * NW * NA);
  for (int eta = 0; eta < NE; ++eta)
    for (int w = 0; w < NW; ++w) {
      const double perp = (chain.levels[eta] * p.y - grids.wage[w]) / (1.0 - p.beta * (1.0 - p.delta));
      const double j0 = perp > 0.0 ? perp : 0.0;
      for (int ia = 0; ia < NA; ++ia) j[(eta * NW + w) * NA + ia] = j0;
    }

  std::vector<double> history;
  for (int it = 1; it <= p.max_iter_outer; ++it) {
    std::vector<double> theta = tightness_from_firm_value(j, p, grids, chain);
    WorkerSolution ws = solve_household(theta, p, grids, chain);
    std::vector<double> j_new = solve_firm(ws, p, grids, chain);
    detail::check_finite(j_new, "firm value", it);

    double residual = 0.0;
    for (size_t i = 0; i < j.size(); ++i) {
      const double d = std::abs(j_new[i] - j[i]);
      if (d > residual) residual = d;
    }
    history.push_back(residual);
    if (log) *log << "outer iteration " << it << " residual " << residual << "\n";

    if (residual < p.tol_outer) {
      Equilibrium eq;
      eq.market.n_eta = NE;
      eq.market.n_w = NW;
      eq.market.n_a = NA;
      eq.market.j = std::move(j);         // the values theta was derived from
      eq.market.theta = std::move(theta);
      eq.ws = std::move(ws);
      eq.iterations = it;
      eq.residual = residual;
      return eq;
    }

    if (p.damping_j == 1.0) {
      j = std::move(j_new);
    } else {
      for (size_t i = 0; i < j.size(); ++i)
        j[i] = p.damping_j * j_new[i] + (1.0 - p.damping_j) * j[i];
    }
  }

  std::ostringstream os;
  os << "equilibrium outer loop hit the cap (" << p.max_iter_outer << "); residual history:";
  for (double r : history) os << " " << r;
  throw solver_error(os.str());
}

}  // namespace wagefloor
