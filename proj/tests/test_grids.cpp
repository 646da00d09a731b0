#include <catch2/catch_amalgamated.hpp>

#include "wagefloor/grids.hpp"

using namespace wagefloor;

TEST_CASE("wage grid: 20 evenly spaced nodes from 0 to the ceiling") {
  Parameters p;
  Grids g = build_grids(p);
  REQUIRE(g.wage.size() == 20);
  CHECK(g.wage.front() == 0.0);
  CHECK(g.wage.back() == 1.4254);
  const double dw = 1.4254 / 19.0;
  for (int j = 0; j < 20; ++j) CHECK(g.wage[j] == Catch::Approx(dw * j).margin(1e-14));
  CHECK(g.wage[10] == Catch::Approx(0.7502105263157895).margin(1e-15));
}

TEST_CASE("floor masking: snapped node barred, first admissible strictly above") {
  Parameters p;

  SECTION("no floor admits every node") {
    p.w_min = 0.0;
    Grids g = build_grids(p);
    for (char a : g.admissible_wage) CHECK(a == 1);
    CHECK(first_admissible_wage(g) == 0);
  }
  SECTION("floor 0.1 snaps to node 2 (0.1500) and admits from node 3") {
    p.w_min = 0.1;
    Grids g = build_grids(p);
    CHECK(first_admissible_wage(g) == 3);
    CHECK_FALSE(g.admissible_wage[2]);
    CHECK(g.admissible_wage[3]);
  }
  SECTION("floor 0.7 snaps to node 10 (0.7502) and admits from node 11") {
    p.w_min = 0.7;
    Grids g = build_grids(p);
    CHECK(first_admissible_wage(g) == 11);
    CHECK_FALSE(g.admissible_wage[10]);
    CHECK(g.admissible_wage[11]);
  }
  SECTION("floor exactly on a node bars that node") {
    p.w_min = 1.4254 * 5.0 / 19.0;
    Grids g = build_grids(p);
    CHECK(first_admissible_wage(g) == 6);
  }
  SECTION("floor above every node leaves nothing admissible") {
    p.w_min = 1.4254;  // snaps to the top node, nothing strictly above
    Grids g = build_grids(p);
    CHECK(first_admissible_wage(g) == -1);
  }
}

TEST_CASE("uniform wealth grid") {
  Parameters p;
  p.wealth_grid = "uniform";
  p.n_a = 11;
  p.a_min = -1.0;
  p.a_max = 9.0;
  Grids g = build_grids(p);
  REQUIRE(g.wealth.size() == 11);
  for (int i = 0; i < 11; ++i) CHECK(g.wealth[i] == Catch::Approx(-1.0 + i).margin(1e-14));
}

TEST_CASE("dense-bottom wealth grid: fine below the knee, stretched above") {
  Parameters p;  // defaults: [-5, 700], knee 30, dense share 0.85, 141 points
  Grids g = build_grids(p);
  REQUIRE(g.wealth.size() == 141);
  CHECK(g.wealth.front() == -5.0);
  CHECK(g.wealth.back() == 700.0);
  for (size_t i = 1; i < g.wealth.size(); ++i) CHECK(g.wealth[i] > g.wealth[i - 1]);

  // knee node is exact and the dense step is constant below it
  const int n_dense = 120;
  CHECK(g.wealth[n_dense - 1] == 30.0);
  const double h = 35.0 / (n_dense - 1);
  for (int i = 1; i < n_dense; ++i)
    CHECK(g.wealth[i] - g.wealth[i - 1] == Catch::Approx(h).margin(1e-12));

  // steps grow monotonically above the knee
  for (size_t i = n_dense; i + 1 < g.wealth.size(); ++i)
    CHECK(g.wealth[i + 1] - g.wealth[i] >= g.wealth[i] - g.wealth[i - 1] - 1e-12);

  // a worker saving one dense step per month needs less than the lowest wage
  CHECK(h < 0.3);
}

TEST_CASE("degenerate dense share collapses to uniform") {
  Parameters p;
  p.n_a = 10;
  p.grid_dense_share = 0.999;  // all points below the knee
  p.grid_knee = 600.0;
  Grids g = build_grids(p);
  REQUIRE(g.wealth.size() == 10);
  CHECK(g.wealth.front() == -5.0);
  CHECK(g.wealth.back() == 700.0);
}
