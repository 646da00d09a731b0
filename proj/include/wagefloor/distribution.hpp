#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wagefloor/equilibrium.hpp"
#include "wagefloor/errors.hpp"
#include "wagefloor/grids.hpp"
#include "wagefloor/markov.hpp"
#include "wagefloor/matching.hpp"
#include "wagefloor/params.hpp"

namespace wagefloor {

// Bijective packing of (eta, employment, wealth) into a flat index. job = 0 is
// unemployment; job = 1 + j is employment at wage grid index j.
struct StateIndex {
  int n_eta = 0, n_w = 0, n_a = 0;

  int size() const { return n_eta * (n_w + 1) * n_a; }
  int pack(int eta, int job, int ia) const { return (eta * (n_w + 1) + job) * n_a + ia; }
  void unpack(int s, int& eta, int& job, int& ia) const {
    ia = s % n_a;
    const int t = s / n_a;
    job = t % (n_w + 1);
    eta = t / (n_w + 1);
  }
};

// Row-major CSR. Rows are current states, columns next-period states.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1
  std::vector<int> col;
  std::vector<double> val;
};

struct SteadyState {
  std::vector<double> psi;            // over flat state indices
  double u_rate_low = 0.0;            // unemployed-at-lowest-productivity share of the population
  double u_rate_high = 0.0;           // unemployed-at-highest-productivity share of the population
  double j2j_rate = 0.0;              // monthly job-to-job transition rate
  std::vector<double> earnings_hist;  // n_w+1 bins: unemployed at 0, then each wage node
  std::vector<double> wealth_hist;    // n_a bins, one per wealth node
};

namespace detail {

// accumulate probability into a fixed-capacity sparse row, merging duplicates
struct RowBuilder {
  int cols[8];
  double vals[8];
  int n = 0;

  void add(int c, double v) {
    if (v == 0.0) return;
    for (int i = 0; i < n; ++i)
      if (cols[i] == c) {
        vals[i] += v;
        return;
      }
    cols[n] = c;
    vals[n] = v;
    ++n;
  }
};

}  // namespace detail

// One period of the induced state dynamics, current state read at the
// production stage: savings move wealth to the policy node; search resolves
// (unemployed always search, employed with probability lambda_e); separation
// hits employed workers who did not just match; productivity then transitions.
// New hires appear next period at their target wage. Rows sum to 1 within
// 1e-12 and hold at most 8 nonzeros.
inline SparseMatrix build_transition_matrix(const Equilibrium& eq, const Parameters& p,
                                            const Grids& grids, const MarkovChain& chain) {
  const WorkerSolution& ws = eq.ws;
  const StateIndex st{ws.n_eta, ws.n_w, ws.n_a};
  const MatchingTech match{p.gamma};
  const int n = st.size();

  std::vector<detail::RowBuilder> rows(n);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < n; ++s) {
    int eta, job, ia;
    st.unpack(s, eta, job, ia);
    detail::RowBuilder& row = rows[s];
    if (job == 0) {
      const int sa = ws.savings_u[ws.idx_u(eta, ia)];
      const int wt = ws.target_wage_u[ws.idx_u(eta, sa)];
      const double pe = match.job_finding(ws.theta[ws.idx_e(eta, wt, sa)]);
      for (int e2 = 0; e2 < chain.n; ++e2) {
        const double t = chain.prob(eta, e2);
        row.add(st.pack(e2, 1 + wt, sa), pe * t);
        row.add(st.pack(e2, 0, sa), (1.0 - pe) * t);
      }
    } else {
      const int w = job - 1;
      const int sa = ws.savings_e[ws.idx_e(eta, w, ia)];
      const int wt = ws.target_wage_e[ws.idx_e(eta, w, sa)];
      const double pe = p.lambda_e * match.job_finding(ws.theta[ws.idx_e(eta, wt, sa)]);
      for (int e2 = 0; e2 < chain.n; ++e2) {
        const double t = chain.prob(eta, e2);
        row.add(st.pack(e2, 1 + wt, sa), pe * t);
        row.add(st.pack(e2, 1 + w, sa), (1.0 - pe) * (1.0 - p.delta) * t);
        row.add(st.pack(e2, 0, sa), (1.0 - pe) * p.delta * t);
      }
    }
  }

  SparseMatrix m;
  m.n = n;
  m.row_ptr.resize(n + 1);
  m.row_ptr[0] = 0;
  for (int s = 0; s < n; ++s) m.row_ptr[s + 1] = m.row_ptr[s] + rows[s].n;
  m.col.resize(m.row_ptr[n]);
  m.val.resize(m.row_ptr[n]);
  for (int s = 0; s < n; ++s) {
    double sum = 0.0;
    for (int i = 0; i < rows[s].n; ++i) {
      m.col[m.row_ptr[s] + i] = rows[s].cols[i];
      m.val[m.row_ptr[s] + i] = rows[s].vals[i];
      sum += rows[s].vals[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw solver_error("transition row " + std::to_string(s) + " sums to " + std::to_string(sum));
  }
  return m;
}

// Start distribution with all mass at the lowest wealth node, spread evenly
// over (productivity, employment) cells. The ergodic set is reached from below
// (wealth climbs by saving), so this start keeps transient top wealth nodes
// empty during the power iteration.
inline std::vector<double> bottom_wealth_start(const StateIndex& st) {
  std::vector<double> start(st.size(), 0.0);
  for (int eta = 0; eta < st.n_eta; ++eta)
    for (int job = 0; job <= st.n_w; ++job) start[st.pack(eta, job, 0)] = 1.0;
  return start;
}

// Power iteration psi <- psi P until the L1 change falls below tol; returns
// the iterate whose residual was measured. Starts from the uniform vector
// unless a start distribution is given. Mass placed on transient states (for
// example top wealth nodes nobody saves into) drains only at the dissaving
// speed, so callers that know the ergodic set is reached from below pass a
// bottom-wealth start; the fixed point itself does not depend on the start.
inline std::vector<double> stationary_distribution(const SparseMatrix& P, double tol = 1e-12,
                                                   long max_iter = 1000000,
                                                   const std::vector<double>* start = nullptr) {
  const int n = P.n;
  std::vector<double> psi(n, 1.0 / n), next(n);
  if (start) {
    if (static_cast<int>(start->size()) != n)
      throw std::invalid_argument("stationary_distribution: start vector has wrong size");
    double mass = 0.0;
    for (double v : *start) {
      if (!(v >= 0.0)) throw std::invalid_argument("stationary_distribution: negative start mass");
      mass += v;
    }
    if (!(mass > 0.0)) throw std::invalid_argument("stationary_distribution: start vector has no mass");
    for (int i = 0; i < n; ++i) psi[i] = (*start)[i] / mass;
  }
  double residual = 0.0;
  for (long it = 0; it < max_iter; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 0; s < n; ++s) {
      const double ps = psi[s];
      if (ps == 0.0) continue;
      for (int k = P.row_ptr[s]; k < P.row_ptr[s + 1]; ++k) next[P.col[k]] += ps * P.val[k];
    }
    residual = 0.0;
    for (int i = 0; i < n; ++i) residual += std::abs(next[i] - psi[i]);
    if (residual < tol) return psi;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) mass += next[i];
    for (int i = 0; i < n; ++i) next[i] /= mass;
    psi.swap(next);
  }
  throw solver_error("stationary distribution did not converge; last L1 change " +
                     std::to_string(residual));
}

// Stocks and flows at the production stage. u_rate_low/u_rate_high are the
// population shares unemployed at each productivity level (they sum to the
// total unemployment rate); j2j_rate is the share of currently employed
// workers who will move straight to another employer this period.
inline SteadyState compute_indicators(const std::vector<double>& psi, const Equilibrium& eq,
                                      const Parameters& p, const Grids& grids) {
  const WorkerSolution& ws = eq.ws;
  const StateIndex st{ws.n_eta, ws.n_w, ws.n_a};
  const MatchingTech match{p.gamma};

  SteadyState out;
  out.psi = psi;
  out.earnings_hist.assign(ws.n_w + 1, 0.0);
  out.wealth_hist.assign(ws.n_a, 0.0);

  std::vector<double> mass_eta(ws.n_eta, 0.0), mass_u(ws.n_eta, 0.0);
  double emp_mass = 0.0, j2j_flow = 0.0;
  for (int s = 0; s < st.size(); ++s) {
    int eta, job, ia;
    st.unpack(s, eta, job, ia);
    const double m = psi[s];
    mass_eta[eta] += m;
    out.wealth_hist[ia] += m;
    out.earnings_hist[job] += m;  // bin 0 collects the unemployed
    if (job == 0) {
      mass_u[eta] += m;
    } else {
      const int w = job - 1;
      const int sa = ws.savings_e[ws.idx_e(eta, w, ia)];
      const int wt = ws.target_wage_e[ws.idx_e(eta, w, sa)];
      const double pe = p.lambda_e * match.job_finding(ws.theta[ws.idx_e(eta, wt, sa)]);
      emp_mass += m;
      j2j_flow += m * pe;
    }
  }
  double total = 0.0;
  for (int eta = 0; eta < ws.n_eta; ++eta) {
    if (!(mass_eta[eta] > 0.0))
      throw solver_error("no stationary mass at productivity state " + std::to_string(eta));
    total += mass_eta[eta];
  }

  out.u_rate_low = mass_u[0] / total;
  out.u_rate_high = mass_u[ws.n_eta - 1] / total;
  out.j2j_rate = emp_mass > 0.0 ? j2j_flow / emp_mass : 0.0;
  return out;
}

}  // namespace wagefloor
