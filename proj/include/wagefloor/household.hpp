#pragma once

#include <cmath>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "wagefloor/errors.hpp"
#include "wagefloor/grids.hpp"
#include "wagefloor/markov.hpp"
#include "wagefloor/matching.hpp"
#include "wagefloor/params.hpp"

namespace wagefloor {

// u(c) = c^(1-sigma)/(1-sigma), with the log limit at sigma = 1.
inline double utility(double c, double sigma) {
  if (!(c > 0.0)) throw std::domain_error("utility: consumption must be positive");
  if (sigma == 1.0) return std::log(c);
  if (sigma == 2.0) return -1.0 / c;  // calibrated case, avoids pow
  return std::pow(c, 1.0 - sigma) / (1.0 - sigma);
}

// Budget identity c + a_next/(1+r) = y_min + omega + a. Non-positive results
// mean the choice is infeasible; no error here by design.
inline double consumption_from_budget(double omega, double a, double a_next, const Parameters& p) {
  return p.y_min + omega + a - a_next / (1.0 + p.r);
}

// Worker values and policies on the discrete state space. Employed arrays are
// flat (eta, wage, wealth) row-major; unemployed arrays are (eta, wealth).
// v_*, savings_*, consumption_* are indexed by start-of-period wealth; r_* and
// target_wage_* are indexed by post-savings wealth (search follows the savings
// choice within the period), on the same wealth grid.
struct WorkerSolution {
  int n_eta = 0, n_w = 0, n_a = 0;
  std::vector<double> v_e, v_u;
  std::vector<double> r_e, r_u;
  std::vector<int> savings_e, savings_u;
  std::vector<double> consumption_e, consumption_u;
  std::vector<int> target_wage_e, target_wage_u;
  std::vector<double> theta;  // tightness the solution was computed against

  int idx_e(int eta, int w, int ia) const { return (eta * n_w + w) * n_a + ia; }
  int idx_u(int eta, int ia) const { return eta * n_a + ia; }
  int size_e() const { return n_eta * n_w * n_a; }
  int size_u() const { return n_eta * n_a; }
};

struct SearchChoice {
  double value = 0.0;
  int target = -1;  // wage grid index
};

namespace detail {

// Shared argmax over admissible posted wages: value(j) = pe(j)*ev_e(j) +
// (1-pe(j))*base. scale is 1 for unemployed searchers, lambda_e for employed.
// Lowest index wins ties. Throws if the admissible set is empty.
template <class ProbFn, class EvFn>
inline SearchChoice argmax_offer(const Grids& grids, double base, double scale, ProbFn&& prob,
                                 EvFn&& ev_e) {
  const int n_w = static_cast<int>(grids.wage.size());
  double best = -std::numeric_limits<double>::infinity();
  int best_j = -1;
  for (int j = 0; j < n_w; ++j) {
    if (!grids.admissible_wage[j]) continue;
    const double pe = scale * prob(j);
    const double val = pe * ev_e(j) + (1.0 - pe) * base;
    if (val > best) {
      best = val;
      best_j = j;
    }
  }
  if (best_j < 0) throw std::invalid_argument("no admissible wage on the grid (w_min excludes all nodes)");
  return {best, best_j};
}

}  // namespace detail

// Optimal application choice of an unemployed worker with post-savings wealth
// index a_next: max over admissible w of p(theta)*V_e + (1-p)*V_u. Workers
// value continuation at their current productivity level; productivity
// switches enter the model through the population law of motion, not through
// the valuation. The chain argument is kept for interface symmetry with the
// population-side operators.
inline SearchChoice search_value_unemployed(const WorkerSolution& v, const std::vector<double>& theta,
                                            const Parameters& p, const Grids& grids,
                                            const MarkovChain& chain, int eta, int a_next) {
  (void)chain;
  const MatchingTech match{p.gamma};
  const double base = v.v_u[v.idx_u(eta, a_next)];
  auto prob = [&](int j) { return match.job_finding(theta[v.idx_e(eta, j, a_next)]); };
  auto eve = [&](int j) { return v.v_e[v.idx_e(eta, j, a_next)]; };
  return detail::argmax_offer(grids, base, 1.0, prob, eve);
}

// Same for a worker currently employed at wage index w. A search opportunity
// arrives with probability lambda_e; new matches are immune to this period's
// separation, non-movers separate with probability delta.
inline SearchChoice search_value_employed(const WorkerSolution& v, const std::vector<double>& theta,
                                          const Parameters& p, const Grids& grids,
                                          const MarkovChain& chain, int eta, int w, int a_next) {
  (void)chain;
  const MatchingTech match{p.gamma};
  const double stay = (1.0 - p.delta) * v.v_e[v.idx_e(eta, w, a_next)] +
                      p.delta * v.v_u[v.idx_u(eta, a_next)];
  auto prob = [&](int j) { return match.job_finding(theta[v.idx_e(eta, j, a_next)]); };
  auto eve = [&](int j) { return v.v_e[v.idx_e(eta, j, a_next)]; };
  return detail::argmax_offer(grids, stay, p.lambda_e, prob, eve);
}

// Consumption/savings stage: for every state maximize u(c) + beta*r(a_next)
// over the savings grid subject to c > 0, a_next >= a_min. On-grid argmax, no
// interpolation; lowest index wins ties. Reads ws.r_*, writes ws.v_*,
// savings_*, consumption_*.
inline void bellman_update(WorkerSolution& ws, const Parameters& p, const Grids& grids) {
  const int NE = ws.n_eta, NW = ws.n_w, NA = ws.n_a;
  const double beta = p.beta, r1 = 1.0 + p.r, sigma = p.sigma;

  // the tightest budget is the unemployed worker at the borrowing limit; check
  // it up front so the in-loop failure branch below is unreachable (a throw
  // from inside an omp region would not propagate)
  if (!(p.y_min + grids.wealth[0] - grids.wealth[0] / r1 > 0.0))
    throw solver_error("no feasible savings choice at the borrowing limit");

  auto maximize = [&](double base, const double* r_row) {
    // base = y_min + omega + a; wealth ascending makes c decreasing, so the
    // first infeasible choice ends the scan
    double best = -std::numeric_limits<double>::infinity(), best_c = 0.0;
    int best_i = -1;
    for (int ia2 = 0; ia2 < NA; ++ia2) {
      const double c = base - grids.wealth[ia2] / r1;
      if (!(c > 0.0)) break;
      const double val = utility(c, sigma) + beta * r_row[ia2];
      if (val > best) {
        best = val;
        best_i = ia2;
        best_c = c;
      }
    }
    if (best_i < 0) throw solver_error("no feasible savings choice; parameter feasibility violated");
    return std::tuple<double, int, double>{best, best_i, best_c};
  };

#pragma omp parallel for collapse(2) schedule(static)
  for (int eta = 0; eta < NE; ++eta)
    for (int ia = 0; ia < NA; ++ia) {
      const double base = p.y_min + 0.0 + grids.wealth[ia];
      auto [val, i, c] = maximize(base, &ws.r_u[ws.idx_u(eta, 0)]);
      const int s = ws.idx_u(eta, ia);
      ws.v_u[s] = val;
      ws.savings_u[s] = i;
      ws.consumption_u[s] = c;
    }

#pragma omp parallel for collapse(3) schedule(static)
  for (int eta = 0; eta < NE; ++eta)
    for (int w = 0; w < NW; ++w)
      for (int ia = 0; ia < NA; ++ia) {
        const double base = p.y_min + grids.wage[w] + grids.wealth[ia];
        auto [val, i, c] = maximize(base, &ws.r_e[ws.idx_e(eta, w, 0)]);
        const int s = ws.idx_e(eta, w, ia);
        ws.v_e[s] = val;
        ws.savings_e[s] = i;
        ws.consumption_e[s] = c;
      }
}

// Inner solver: iterate (search-value operators -> Bellman update) to the
// fixed point, sup-norm tolerance tol_vfi measured across full sweeps.
// Between full sweeps, howard_steps frozen-policy evaluation sweeps accelerate
// convergence without changing the fixed point (howard_steps = 0 recovers
// plain value iteration). theta stays fixed for the whole call.
inline WorkerSolution solve_household(const std::vector<double>& theta, const Parameters& p,
                                      const Grids& grids, const MarkovChain& chain,
                                      std::vector<double>* residual_history = nullptr) {
  const int NE = chain.n, NW = static_cast<int>(grids.wage.size()),
            NA = static_cast<int>(grids.wealth.size());
  if (static_cast<int>(theta.size()) != NE * NW * NA)
    throw std::invalid_argument("solve_household: tightness array has wrong shape");
  if (first_admissible_wage(grids) < 0)
    throw std::invalid_argument("no admissible wage on the grid (w_min excludes all nodes)");

  WorkerSolution ws;
  ws.n_eta = NE;
  ws.n_w = NW;
  ws.n_a = NA;
  ws.v_e.resize(ws.size_e());
  ws.v_u.resize(ws.size_u());
  ws.r_e.resize(ws.size_e());
  ws.r_u.resize(ws.size_u());
  ws.savings_e.resize(ws.size_e());
  ws.savings_u.resize(ws.size_u());
  ws.consumption_e.resize(ws.size_e());
  ws.consumption_u.resize(ws.size_u());
  ws.target_wage_e.resize(ws.size_e());
  ws.target_wage_u.resize(ws.size_u());
  ws.theta = theta;

  // initial guess: consume the hand-to-mouth budget forever
  const double vfac = 1.0 / (1.0 - p.beta);
  for (int eta = 0; eta < NE; ++eta)
    for (int ia = 0; ia < NA; ++ia) {
      const double a = grids.wealth[ia];
      double c = consumption_from_budget(0.0, a, a, p);
      if (!(c > 0.0)) c = 1e-12;
      ws.v_u[ws.idx_u(eta, ia)] = utility(c, p.sigma) * vfac;
      for (int w = 0; w < NW; ++w) {
        double ce = consumption_from_budget(grids.wage[w], a, a, p);
        if (!(ce > 0.0)) ce = 1e-12;
        ws.v_e[ws.idx_e(eta, w, ia)] = utility(ce, p.sigma) * vfac;
      }
    }

  // job-finding probabilities are a pure function of the fixed theta
  const MatchingTech match{p.gamma};
  std::vector<double> pfind(theta.size());
  for (size_t i = 0; i < theta.size(); ++i) pfind[i] = match.job_finding(theta[i]);

  std::vector<double> v_e_prev(ws.size_e()), v_u_prev(ws.size_u());
  std::vector<double> pe_u_frozen(ws.size_u());
  std::vector<double> pe_e_frozen(ws.size_e());
  std::vector<double> flow_e(ws.size_e()), flow_u(ws.size_u());

  // continuation of a non-mover: separation draw at the current productivity
  auto stay_value = [&](int eta, int w, int an) {
    return (1.0 - p.delta) * ws.v_e[ws.idx_e(eta, w, an)] + p.delta * ws.v_u[ws.idx_u(eta, an)];
  };

  // full search sweep: fresh argmax over admissible wages at every a_next
  auto sweep_search = [&]() {
#pragma omp parallel for collapse(2) schedule(static)
    for (int eta = 0; eta < NE; ++eta)
      for (int an = 0; an < NA; ++an) {
        auto prob = [&](int j) { return pfind[ws.idx_e(eta, j, an)]; };
        auto eve = [&](int j) { return ws.v_e[ws.idx_e(eta, j, an)]; };
        const int su = ws.idx_u(eta, an);
        auto cu = detail::argmax_offer(grids, ws.v_u[su], 1.0, prob, eve);
        ws.r_u[su] = cu.value;
        ws.target_wage_u[su] = cu.target;
        for (int w = 0; w < NW; ++w) {
          auto ce = detail::argmax_offer(grids, stay_value(eta, w, an), p.lambda_e, prob, eve);
          const int se = ws.idx_e(eta, w, an);
          ws.r_e[se] = ce.value;
          ws.target_wage_e[se] = ce.target;
        }
      }
  };

  double residual = std::numeric_limits<double>::infinity();
  double prev_residual = std::numeric_limits<double>::infinity();
  int warned = 0;
  bool converged = false;

  for (int it = 0; it < p.max_iter_vfi; ++it) {
    v_e_prev = ws.v_e;
    v_u_prev = ws.v_u;
    sweep_search();
    bellman_update(ws, p, grids);

    residual = 0.0;
#pragma omp parallel for reduction(max : residual) schedule(static)
    for (int i = 0; i < static_cast<int>(ws.v_e.size()); ++i) {
      const double d = std::abs(ws.v_e[i] - v_e_prev[i]);
      if (d > residual) residual = d;
    }
#pragma omp parallel for reduction(max : residual) schedule(static)
    for (int i = 0; i < static_cast<int>(ws.v_u.size()); ++i) {
      const double d = std::abs(ws.v_u[i] - v_u_prev[i]);
      if (d > residual) residual = d;
    }
    if (residual_history) residual_history->push_back(residual);
    if (it > 10 && residual > prev_residual && warned++ == 0)
      std::cerr << "warning: household residual rose at sweep " << it << " (" << prev_residual
                << " -> " << residual << ")\n";
    prev_residual = residual;
    if (residual < p.tol_vfi) {
      converged = true;
      break;
    }

    if (p.howard_steps > 0) {
      // freeze policies; pe and flow utility depend only on them
#pragma omp parallel for collapse(2) schedule(static)
      for (int eta = 0; eta < NE; ++eta)
        for (int an = 0; an < NA; ++an) {
          const int su = ws.idx_u(eta, an);
          pe_u_frozen[su] = pfind[ws.idx_e(eta, ws.target_wage_u[su], an)];
          for (int w = 0; w < NW; ++w) {
            const int se = ws.idx_e(eta, w, an);
            pe_e_frozen[se] = p.lambda_e * pfind[ws.idx_e(eta, ws.target_wage_e[se], an)];
          }
        }
      for (int i = 0; i < static_cast<int>(flow_u.size()); ++i)
        flow_u[i] = utility(ws.consumption_u[i], p.sigma);
      for (int i = 0; i < static_cast<int>(flow_e.size()); ++i)
        flow_e[i] = utility(ws.consumption_e[i], p.sigma);

      for (int h = 0; h < p.howard_steps; ++h) {
#pragma omp parallel for collapse(2) schedule(static)
        for (int eta = 0; eta < NE; ++eta)
          for (int an = 0; an < NA; ++an) {
            const int su = ws.idx_u(eta, an);
            const double pu = pe_u_frozen[su];
            ws.r_u[su] = pu * ws.v_e[ws.idx_e(eta, ws.target_wage_u[su], an)] +
                         (1.0 - pu) * ws.v_u[su];
            for (int w = 0; w < NW; ++w) {
              const int se = ws.idx_e(eta, w, an);
              const double pe = pe_e_frozen[se];
              ws.r_e[se] = pe * ws.v_e[ws.idx_e(eta, ws.target_wage_e[se], an)] +
                           (1.0 - pe) * stay_value(eta, w, an);
            }
          }
#pragma omp parallel for collapse(2) schedule(static)
        for (int eta = 0; eta < NE; ++eta)
          for (int ia = 0; ia < NA; ++ia) {
            const int su = ws.idx_u(eta, ia);
            ws.v_u[su] = flow_u[su] + p.beta * ws.r_u[ws.idx_u(eta, ws.savings_u[su])];
            for (int w = 0; w < NW; ++w) {
              const int se = ws.idx_e(eta, w, ia);
              ws.v_e[se] = flow_e[se] + p.beta * ws.r_e[ws.idx_e(eta, w, ws.savings_e[se])];
            }
          }
      }
    }
  }

  if (!converged)
    throw solver_error("household value iteration hit the cap (" + std::to_string(p.max_iter_vfi) +
                       " sweeps); last residual " + std::to_string(residual));
  return ws;
}

}  // namespace wagefloor
