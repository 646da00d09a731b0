#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "wagefloor/household.hpp"

using namespace wagefloor;

namespace {

// Small fast instance: 2 productivity states, 3 wages, 5 wealth nodes.
Parameters tiny_params() {
  Parameters p;
  p.beta = 0.92;
  p.n_a = 5;
  p.n_w = 3;
  p.a_min = 0.0;
  p.a_max = 2.0;
  p.wealth_grid = "uniform";
  p.tol_vfi = 1e-12;
  return p;
}

// Deterministic tightness pattern with healthy gaps (no argmax knife-edges).
std::vector<double> tiny_theta(const Parameters& p) {
  std::vector<double> theta(p.n_eta * p.n_w * p.n_a);
  for (int eta = 0; eta < p.n_eta; ++eta)
    for (int w = 0; w < p.n_w; ++w)
      for (int ia = 0; ia < p.n_a; ++ia)
        theta[(eta * p.n_w + w) * p.n_a + ia] =
            0.3 + 0.8 * w + 0.25 * eta + 0.07 * ia;
  return theta;
}

// Independent plain value iteration over the same model: no Howard steps, no
// shared helpers, direct loops. Search values come from the current V and the
// Bellman stage maximizes over the savings grid.
struct OracleSolution {
  std::vector<double> v_e, v_u, r_e, r_u;
  std::vector<int> sav_e, sav_u, tgt_e, tgt_u;
};

OracleSolution oracle_vfi(const Parameters& p, const Grids& g, const std::vector<double>& theta) {
  const int NE = p.n_eta, NW = p.n_w, NA = p.n_a;
  auto ie = [&](int e, int w, int a) { return (e * NW + w) * NA + a; };
  auto iu = [&](int e, int a) { return e * NA + a; };
  const MatchingTech match{p.gamma};
  const double r1 = 1.0 + p.r;

  auto util = [&](double c) {
    if (p.sigma == 1.0) return std::log(c);
    return std::pow(c, 1.0 - p.sigma) / (1.0 - p.sigma);
  };

  OracleSolution o;
  o.v_e.assign(NE * NW * NA, 0.0);
  o.v_u.assign(NE * NA, 0.0);
  o.r_e.assign(NE * NW * NA, 0.0);
  o.r_u.assign(NE * NA, 0.0);
  o.sav_e.assign(NE * NW * NA, -1);
  o.sav_u.assign(NE * NA, -1);
  o.tgt_e.assign(NE * NW * NA, -1);
  o.tgt_u.assign(NE * NA, -1);

  std::vector<double> ve2(NE * NW * NA), vu2(NE * NA);
  for (int it = 0; it < 200000; ++it) {
    // search stage against the current value functions, own-eta continuation
    for (int e = 0; e < NE; ++e)
      for (int an = 0; an < NA; ++an) {
        double best = -1e300;
        int bj = -1;
        for (int j = 0; j < NW; ++j) {
          if (!g.admissible_wage[j]) continue;
          const double pe = match.job_finding(theta[ie(e, j, an)]);
          const double val = pe * o.v_e[ie(e, j, an)] + (1.0 - pe) * o.v_u[iu(e, an)];
          if (val > best) {
            best = val;
            bj = j;
          }
        }
        o.r_u[iu(e, an)] = best;
        o.tgt_u[iu(e, an)] = bj;
        for (int w = 0; w < NW; ++w) {
          const double stay =
              (1.0 - p.delta) * o.v_e[ie(e, w, an)] + p.delta * o.v_u[iu(e, an)];
          double beste = -1e300;
          int bje = -1;
          for (int j = 0; j < NW; ++j) {
            if (!g.admissible_wage[j]) continue;
            const double pe = p.lambda_e * match.job_finding(theta[ie(e, j, an)]);
            const double val = pe * o.v_e[ie(e, j, an)] + (1.0 - pe) * stay;
            if (val > beste) {
              beste = val;
              bje = j;
            }
          }
          o.r_e[ie(e, w, an)] = beste;
          o.tgt_e[ie(e, w, an)] = bje;
        }
      }

    // consumption/savings stage
    double diff = 0.0;
    for (int e = 0; e < NE; ++e)
      for (int a = 0; a < NA; ++a) {
        double best = -1e300, bc = 0.0;
        int bi = -1;
        for (int a2 = 0; a2 < NA; ++a2) {
          const double c = p.y_min + g.wealth[a] - g.wealth[a2] / r1;
          if (!(c > 0.0)) continue;
          const double val = util(c) + p.beta * o.r_u[iu(e, a2)];
          if (val > best) {
            best = val;
            bi = a2;
            bc = c;
          }
        }
        (void)bc;
        vu2[iu(e, a)] = best;
        o.sav_u[iu(e, a)] = bi;
        for (int w = 0; w < NW; ++w) {
          double beste = -1e300;
          int bie = -1;
          for (int a2 = 0; a2 < NA; ++a2) {
            const double c = p.y_min + g.wage[w] + g.wealth[a] - g.wealth[a2] / r1;
            if (!(c > 0.0)) continue;
            const double val = util(c) + p.beta * o.r_e[ie(e, w, a2)];
            if (val > beste) {
              beste = val;
              bie = a2;
            }
          }
          ve2[ie(e, w, a)] = beste;
          o.sav_e[ie(e, w, a)] = bie;
        }
      }

    for (size_t i = 0; i < o.v_e.size(); ++i) diff = std::max(diff, std::abs(ve2[i] - o.v_e[i]));
    for (size_t i = 0; i < o.v_u.size(); ++i) diff = std::max(diff, std::abs(vu2[i] - o.v_u[i]));
    o.v_e = ve2;
    o.v_u = vu2;
    if (diff < 1e-13) return o;
  }
  FAIL("oracle did not converge");
  return o;
}

}  // namespace

TEST_CASE("utility: CRRA with log limit, throws on non-positive consumption") {
  CHECK(utility(1.0, 2.0) == -1.0);
  CHECK(utility(2.0, 2.0) == -0.5);
  CHECK(utility(std::exp(1.0), 1.0) == Catch::Approx(1.0).margin(1e-14));
  CHECK(utility(2.0, 3.0) == Catch::Approx(std::pow(2.0, -2.0) / -2.0).margin(1e-14));
  CHECK_THROWS_AS(utility(0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(utility(-1.0, 2.0), std::domain_error);
}

TEST_CASE("budget identity") {
  Parameters p;
  const double c = consumption_from_budget(0.75, 2.0, 1.5, p);
  CHECK(c == Catch::Approx(p.y_min + 0.75 + 2.0 - 1.5 / (1.0 + p.r)).margin(1e-15));
}

TEST_CASE("argmax over offers honors the mask and breaks ties low") {
  Parameters p = tiny_params();
  Grids g = build_grids(p);

  auto prob = [](int) { return 0.5; };
  SECTION("exact ties pick the lowest index") {
    auto ev = [](int) { return 3.0; };
    auto c = detail::argmax_offer(g, 1.0, 1.0, prob, ev);
    CHECK(c.target == 0);
    CHECK(c.value == Catch::Approx(0.5 * 3.0 + 0.5 * 1.0).margin(1e-15));
  }
  SECTION("mask excludes nodes from the argmax") {
    p.w_min = g.wage[1];  // snaps to node 1, bars it, admits node 2 only
    Grids gm = build_grids(p);
    auto ev = [](int j) { return j == 0 ? 100.0 : 1.0; };
    auto c = detail::argmax_offer(gm, 0.0, 1.0, prob, ev);
    CHECK(c.target == 2);
  }
  SECTION("empty admissible set throws") {
    p.w_min = p.w_max;  // snapped top node barred, nothing above
    Grids gm = build_grids(p);
    auto ev = [](int) { return 1.0; };
    CHECK_THROWS_AS(detail::argmax_offer(gm, 0.0, 1.0, prob, ev), std::invalid_argument);
  }
}

TEST_CASE("household fixed point matches the independent oracle") {
  Parameters p = tiny_params();
  Grids g = build_grids(p);
  MarkovChain ch = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
  std::vector<double> theta = tiny_theta(p);

  WorkerSolution ws = solve_household(theta, p, g, ch);
  OracleSolution o = oracle_vfi(p, g, theta);

  for (int i = 0; i < ws.size_e(); ++i) {
    CHECK(ws.v_e[i] == Catch::Approx(o.v_e[i]).margin(1e-8));
    CHECK(ws.savings_e[i] == o.sav_e[i]);
    CHECK(ws.target_wage_e[i] == o.tgt_e[i]);
  }
  for (int i = 0; i < ws.size_u(); ++i) {
    CHECK(ws.v_u[i] == Catch::Approx(o.v_u[i]).margin(1e-8));
    CHECK(ws.savings_u[i] == o.sav_u[i]);
    CHECK(ws.target_wage_u[i] == o.tgt_u[i]);
  }
}

TEST_CASE("oracle agreement holds under a floor mask") {
  Parameters p = tiny_params();
  p.w_min = 0.3;  // snaps to the middle node, so only the top wage is open
  Grids g = build_grids(p);
  REQUIRE(first_admissible_wage(g) == 2);
  MarkovChain ch = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
  std::vector<double> theta = tiny_theta(p);

  WorkerSolution ws = solve_household(theta, p, g, ch);
  OracleSolution o = oracle_vfi(p, g, theta);
  for (int i = 0; i < ws.size_u(); ++i) {
    CHECK(ws.v_u[i] == Catch::Approx(o.v_u[i]).margin(1e-8));
    CHECK(ws.target_wage_u[i] == 2);
  }
}

TEST_CASE("Howard acceleration does not move the fixed point") {
  Parameters p = tiny_params();
  Grids g = build_grids(p);
  MarkovChain ch = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
  std::vector<double> theta = tiny_theta(p);

  Parameters plain = p;
  plain.howard_steps = 0;
  WorkerSolution fast = solve_household(theta, p, g, ch);
  WorkerSolution slow = solve_household(theta, plain, g, ch);
  for (int i = 0; i < fast.size_e(); ++i)
    CHECK(fast.v_e[i] == Catch::Approx(slow.v_e[i]).margin(1e-9));
  for (int i = 0; i < fast.size_u(); ++i) {
    CHECK(fast.v_u[i] == Catch::Approx(slow.v_u[i]).margin(1e-9));
    CHECK(fast.savings_u[i] == slow.savings_u[i]);
    CHECK(fast.target_wage_u[i] == slow.target_wage_u[i]);
  }
}

TEST_CASE("standalone search operators agree with the solved arrays") {
  Parameters p = tiny_params();
  Grids g = build_grids(p);
  MarkovChain ch = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
  std::vector<double> theta = tiny_theta(p);
  WorkerSolution ws = solve_household(theta, p, g, ch);

  for (int eta = 0; eta < p.n_eta; ++eta)
    for (int an = 0; an < p.n_a; ++an) {
      auto cu = search_value_unemployed(ws, theta, p, g, ch, eta, an);
      CHECK(cu.value == Catch::Approx(ws.r_u[ws.idx_u(eta, an)]).margin(1e-10));
      CHECK(cu.target == ws.target_wage_u[ws.idx_u(eta, an)]);
      for (int w = 0; w < p.n_w; ++w) {
        auto ce = search_value_employed(ws, theta, p, g, ch, eta, w, an);
        CHECK(ce.value == Catch::Approx(ws.r_e[ws.idx_e(eta, w, an)]).margin(1e-10));
        CHECK(ce.target == ws.target_wage_e[ws.idx_e(eta, w, an)]);
      }
    }
}

TEST_CASE("values are monotone in wealth and wage on the small instance") {
  Parameters p = tiny_params();
  Grids g = build_grids(p);
  MarkovChain ch = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
  WorkerSolution ws = solve_household(tiny_theta(p), p, g, ch);

  for (int eta = 0; eta < p.n_eta; ++eta) {
    for (int ia = 1; ia < p.n_a; ++ia)
      CHECK(ws.v_u[ws.idx_u(eta, ia)] >= ws.v_u[ws.idx_u(eta, ia - 1)] - 1e-12);
    for (int w = 0; w < p.n_w; ++w)
      for (int ia = 1; ia < p.n_a; ++ia)
        CHECK(ws.v_e[ws.idx_e(eta, w, ia)] >= ws.v_e[ws.idx_e(eta, w, ia - 1)] - 1e-12);
    for (int ia = 0; ia < p.n_a; ++ia)
      for (int w = 1; w < p.n_w; ++w)
        CHECK(ws.v_e[ws.idx_e(eta, w, ia)] >= ws.v_e[ws.idx_e(eta, w - 1, ia)] - 1e-12);
  }
}

TEST_CASE("input validation") {
  Parameters p = tiny_params();
  Grids g = build_grids(p);
  MarkovChain ch = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
  std::vector<double> short_theta(5, 1.0);
  CHECK_THROWS_AS(solve_household(short_theta, p, g, ch), std::invalid_argument);

  p.w_min = p.w_max;  // bars everything
  Grids gm = build_grids(p);
  CHECK_THROWS_AS(solve_household(tiny_theta(p), p, gm, ch), std::invalid_argument);
}

TEST_CASE("residual history is recorded and ends converged") {
  Parameters p = tiny_params();
  Grids g = build_grids(p);
  MarkovChain ch = rouwenhorst(p.rho, p.sigma_eps, p.n_eta);
  std::vector<double> hist;
  solve_household(tiny_theta(p), p, g, ch, &hist);
  REQUIRE(!hist.empty());
  CHECK(hist.back() < p.tol_vfi);
}
