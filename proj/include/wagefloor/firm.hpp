#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "wagefloor/errors.hpp"
#include "wagefloor/grids.hpp"
#include "wagefloor/household.hpp"
#include "wagefloor/markov.hpp"
#include "wagefloor/matching.hpp"
#include "wagefloor/params.hpp"

namespace wagefloor {

// Firm-side objects on the (eta, wage, wealth) grid, flat row-major like the
// employed worker arrays. j is the value of a filled job; theta the tightness
// of the submarket posting that wage to applicants with that state.
struct MarketSide {
  int n_eta = 0, n_w = 0, n_a = 0;
  std::vector<double> j;
  std::vector<double> theta;

  int idx(int eta, int w, int ia) const { return (eta * n_w + w) * n_a + ia; }
  int size() const { return n_eta * n_w * n_a; }
};

// One synchronous sweep of the filled-job valuation: flow profit eta*y - w
// plus the discounted continuation, kept only if the match survives both the
// worker's outside offer (prob lambda_e*p at the worker's target submarket)
// and exogenous separation. The worker's savings move the continuation to the
// post-savings wealth node. ws must carry the tightness it was solved against.
inline std::vector<double> firm_value_update(const std::vector<double>& j_prev,
                                             const WorkerSolution& ws, const Parameters& p,
                                             const Grids& grids, const MarkovChain& chain) {
  const int NE = ws.n_eta, NW = ws.n_w, NA = ws.n_a;
  const MatchingTech match{p.gamma};
  std::vector<double> j_next(j_prev.size());
#pragma omp parallel for collapse(3) schedule(static)
  for (int eta = 0; eta < NE; ++eta)
    for (int w = 0; w < NW; ++w)
      for (int ia = 0; ia < NA; ++ia) {
        const int s = ws.idx_e(eta, w, ia);
        const int sa = ws.savings_e[s];
        const int wt = ws.target_wage_e[ws.idx_e(eta, w, sa)];
        const double pe = match.job_finding(ws.theta[ws.idx_e(eta, wt, sa)]);
        double cont = 0.0;
        for (int e2 = 0; e2 < NE; ++e2) cont += chain.prob(eta, e2) * j_prev[ws.idx_e(e2, w, sa)];
        j_next[s] = chain.levels[eta] * p.y - grids.wage[w] +
                    (1.0 - p.delta) * (1.0 - p.lambda_e * pe) * p.beta * cont;
      }
  return j_next;
}

// Iterate firm_value_update to its fixed point (Jacobi sweeps, sup-norm
// tolerance tol_firm). Initial guess: flow-profit perpetuity clamped at 0.
// Values are iterated on the full grid, inadmissible wages included; the
// admissibility mask only gates entry (tightness) and worker choice sets.
inline std::vector<double> solve_firm(const WorkerSolution& ws, const Parameters& p,
                                      const Grids& grids, const MarkovChain& chain) {
  const int NE = ws.n_eta, NW = ws.n_w, NA = ws.n_a;
  std::vector<double> j(ws.size_e());
  for (int eta = 0; eta < NE; ++eta)
    for (int w = 0; w < NW; ++w) {
      const double perp = (chain.levels[eta] * p.y - grids.wage[w]) / (1.0 - p.beta * (1.0 - p.delta));
      const double j0 = perp > 0.0 ? perp : 0.0;
      for (int ia = 0; ia < NA; ++ia) j[ws.idx_e(eta, w, ia)] = j0;
    }

  for (int it = 0; it < p.max_iter_firm; ++it) {
    std::vector<double> j_next = firm_value_update(j, ws, p, grids, chain);
    double residual = 0.0;
#pragma omp parallel for reduction(max : residual) schedule(static)
    for (int i = 0; i < static_cast<int>(j.size()); ++i) {
      const double d = std::abs(j_next[i] - j[i]);
      if (d > residual) residual = d;
    }
    j.swap(j_next);
    if (residual < p.tol_firm) return j;
  }
  throw solver_error("firm value iteration hit the cap (" + std::to_string(p.max_iter_firm) +
                     " sweeps)");
}

// Free entry: vacancies are posted until beta*q(theta)*E_T[J] = k, so theta =
// q^{-1}(k / beta*E_T[J]) where it admits entry (expected value at least k and
// the wage admissible), zero otherwise.
inline std::vector<double> tightness_from_firm_value(const std::vector<double>& j,
                                                     const Parameters& p, const Grids& grids,
                                                     const MarkovChain& chain) {
  const int NE = chain.n, NW = static_cast<int>(grids.wage.size()),
            NA = static_cast<int>(grids.wealth.size());
  const MatchingTech match{p.gamma};
  std::vector<double> theta(j.size(), 0.0);
  auto idx = [&](int eta, int w, int ia) { return (eta * NW + w) * NA + ia; };
#pragma omp parallel for collapse(3) schedule(static)
  for (int eta = 0; eta < NE; ++eta)
    for (int w = 0; w < NW; ++w)
      for (int ia = 0; ia < NA; ++ia) {
        if (!grids.admissible_wage[w]) continue;
        double ej = 0.0;
        for (int e2 = 0; e2 < NE; ++e2) ej += chain.prob(eta, e2) * j[idx(e2, w, ia)];
        ej *= p.beta;
        if (ej >= p.k) theta[idx(eta, w, ia)] = match.invert_vacancy_filling(p.k / ej);
      }
  return theta;
}

}  // namespace wagefloor
