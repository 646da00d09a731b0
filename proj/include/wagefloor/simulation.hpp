#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "wagefloor/distribution.hpp"
#include "wagefloor/equilibrium.hpp"
#include "wagefloor/grids.hpp"
#include "wagefloor/markov.hpp"
#include "wagefloor/matching.hpp"
#include "wagefloor/params.hpp"

namespace wagefloor {

// Empirical counterpart of the matrix-based steady state, with delta-method
// standard errors clustered by worker (worker histories are the independent
// units; within-worker observations are serially dependent).
struct PanelResult {
  SteadyState steady;
  double se_u_low = 0.0;
  double se_u_high = 0.0;
  double se_j2j = 0.0;
  long workers = 0;
  long periods = 0;
  long burn_in = 0;
  int shards = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// per-worker ratio accumulators and their cross moments, all integer-exact
struct RatioMoments {
  std::int64_t a = 0, b = 0, aa = 0, bb = 0, ab = 0;

  void add_worker(std::int64_t ai, std::int64_t bi) {
    a += ai;
    b += bi;
    aa += ai * ai;
    bb += bi * bi;
    ab += ai * bi;
  }
  void merge(const RatioMoments& o) {
    a += o.a;
    b += o.b;
    aa += o.aa;
    bb += o.bb;
    ab += o.ab;
  }
  double ratio() const { return b > 0 ? static_cast<double>(a) / static_cast<double>(b) : 0.0; }
  double se() const {
    if (b <= 0) return 0.0;
    const double r = ratio();
    const double var = (static_cast<double>(aa) - 2.0 * r * static_cast<double>(ab) +
                        r * r * static_cast<double>(bb)) /
                       (static_cast<double>(b) * static_cast<double>(b));
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace detail

// Monte Carlo oracle for the transition-matrix pipeline: simulates worker
// histories through the period stages (savings, search, separation,
// productivity) with a seeded stream, three uniform draws per worker-period
// regardless of the path taken. Workers are split into contiguous shards with
// independent substreams and merged in shard order, so results depend on
// (seed, shards) but not on thread count. Stocks are recorded at the
// production stage after a burn-in of half the periods.
inline PanelResult simulate_panel(const Equilibrium& eq, const Parameters& p, const Grids& grids,
                                  const MarkovChain& chain, std::uint64_t seed, long workers,
                                  long periods, int shards = 64) {
  const WorkerSolution& ws = eq.ws;
  const StateIndex st{ws.n_eta, ws.n_w, ws.n_a};
  const MatchingTech match{p.gamma};
  if (workers < 1 || periods < 1) throw std::invalid_argument("simulate_panel: need workers, periods >= 1");
  if (shards < 1) throw std::invalid_argument("simulate_panel: need shards >= 1");
  if (shards > workers) shards = static_cast<int>(workers);

  std::vector<double> pfind(ws.theta.size());
  for (size_t i = 0; i < ws.theta.size(); ++i) pfind[i] = match.job_finding(ws.theta[i]);

  // initial productivity split matches the chain's stationary shares; everyone
  // starts unemployed at the bottom of the wealth grid and burns in from there
  const std::vector<double> pi = chain_stationary(chain);
  std::vector<long> eta_threshold(chain.n + 1, 0);
  {
    double cum = 0.0;
    for (int e = 0; e < chain.n; ++e) {
      cum += pi[e];
      eta_threshold[e + 1] = static_cast<long>(cum * static_cast<double>(workers) + 0.5);
    }
    eta_threshold[chain.n] = workers;
  }

  const long burn = periods / 2;
  const int n_states = st.size();

  struct ShardAcc {
    detail::RatioMoments u_low, u_high, j2j;
    std::vector<std::int64_t> hist;
  };
  std::vector<ShardAcc> acc(shards);
  for (auto& a : acc) a.hist.assign(n_states, 0);

#pragma omp parallel for schedule(static)
  for (int sh = 0; sh < shards; ++sh) {
    const long w0 = workers * sh / shards;
    const long w1 = workers * (sh + 1) / shards;
    std::mt19937_64 eng(detail::splitmix64(detail::splitmix64(seed) ^
                                           (0x9e3779b97f4a7c15ULL * (std::uint64_t)(sh + 1))));
    auto draw = [&]() { return (eng() >> 11) * 0x1.0p-53; };
    ShardAcc& sa = acc[sh];

    for (long g = w0; g < w1; ++g) {
      int eta = 0;
      while (g >= eta_threshold[eta + 1]) ++eta;
      int job = 0, ia = 0;
      std::int64_t a_low = 0, a_high = 0, b_tot = 0, a_j2j = 0, b_j2j = 0;

      for (long t = 0; t < periods; ++t) {
        if (t >= burn) {
          ++sa.hist[st.pack(eta, job, ia)];
          ++b_tot;  // u rates are shares of all worker-periods, like the matrix side
          if (job == 0 && eta == 0) ++a_low;
          if (job == 0 && eta == chain.n - 1) ++a_high;
          if (job > 0) ++b_j2j;
        }

        const double u1 = draw(), u2 = draw(), u3 = draw();
        int next_job;
        int sv;
        if (job == 0) {
          sv = ws.savings_u[ws.idx_u(eta, ia)];
          const int wt = ws.target_wage_u[ws.idx_u(eta, sv)];
          const bool matched = u1 < pfind[ws.idx_e(eta, wt, sv)];
          next_job = matched ? 1 + wt : 0;
        } else {
          const int w = job - 1;
          sv = ws.savings_e[ws.idx_e(eta, w, ia)];
          const int wt = ws.target_wage_e[ws.idx_e(eta, w, sv)];
          const bool matched = u1 < p.lambda_e * pfind[ws.idx_e(eta, wt, sv)];
          if (matched) {
            if (t >= burn) ++a_j2j;
            next_job = 1 + wt;
          } else {
            next_job = (u2 < p.delta) ? 0 : job;
          }
        }
        int eta2 = chain.n - 1;
        double cdf = 0.0;
        for (int e2 = 0; e2 < chain.n; ++e2) {
          cdf += chain.prob(eta, e2);
          if (u3 < cdf) {
            eta2 = e2;
            break;
          }
        }
        eta = eta2;
        job = next_job;
        ia = sv;
      }
      sa.u_low.add_worker(a_low, b_tot);
      sa.u_high.add_worker(a_high, b_tot);
      sa.j2j.add_worker(a_j2j, b_j2j);
    }
  }

  detail::RatioMoments u_low, u_high, j2j;
  std::vector<std::int64_t> hist(n_states, 0);
  for (int sh = 0; sh < shards; ++sh) {
    u_low.merge(acc[sh].u_low);
    u_high.merge(acc[sh].u_high);
    j2j.merge(acc[sh].j2j);
    for (int s = 0; s < n_states; ++s) hist[s] += acc[sh].hist[s];
  }

  PanelResult out;
  out.workers = workers;
  out.periods = periods;
  out.burn_in = burn;
  out.shards = shards;
  out.se_u_low = u_low.se();
  out.se_u_high = u_high.se();
  out.se_j2j = j2j.se();

  SteadyState& ss = out.steady;
  ss.u_rate_low = u_low.ratio();
  ss.u_rate_high = u_high.ratio();
  ss.j2j_rate = j2j.ratio();
  ss.psi.assign(n_states, 0.0);
  ss.earnings_hist.assign(ws.n_w + 1, 0.0);
  ss.wealth_hist.assign(ws.n_a, 0.0);
  std::int64_t total = 0;
  for (int s = 0; s < n_states; ++s) total += hist[s];
  for (int s = 0; s < n_states; ++s) {
    const double m = static_cast<double>(hist[s]) / static_cast<double>(total);
    ss.psi[s] = m;
    int eta, job, ia;
    st.unpack(s, eta, job, ia);
    ss.earnings_hist[job] += m;
    ss.wealth_hist[ia] += m;
  }
  return out;
}

}  // namespace wagefloor
