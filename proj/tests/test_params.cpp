#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "wagefloor/params.hpp"

using namespace wagefloor;

TEST_CASE("defaults validate and carry the calibration") {
  Parameters p;
  REQUIRE_NOTHROW(validate(p));
  CHECK(p.beta == 0.996);
  CHECK(p.delta == 0.00633);
  CHECK(p.lambda_e == 0.0346);
  CHECK(p.k == 0.77);
  CHECK(p.y_min == 0.05);
  CHECK(p.n_a == 141);
  CHECK(p.n_w == 20);
  CHECK(p.w_max == 1.4254);
  CHECK(p.a_min == -5.0);
  CHECK(p.a_max == 700.0);
}

TEST_CASE("validation rejects out-of-range fields and names them") {
  auto expect_bad = [](auto&& mutate, const std::string& key) {
    Parameters p;
    mutate(p);
    try {
      validate(p);
      FAIL("expected invalid_argument for " + key);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
  };
  expect_bad([](Parameters& p) { p.beta = 1.0; }, "beta");
  expect_bad([](Parameters& p) { p.beta = 0.0; }, "beta");
  expect_bad([](Parameters& p) { p.delta = 0.0; }, "delta");
  expect_bad([](Parameters& p) { p.delta = 1.5; }, "delta");
  expect_bad([](Parameters& p) { p.lambda_e = -0.1; }, "lambda_e");
  expect_bad([](Parameters& p) { p.gamma = 0.0; }, "gamma");
  expect_bad([](Parameters& p) { p.sigma = 0.0; }, "sigma");
  expect_bad([](Parameters& p) { p.rho = 1.0; }, "rho");
  expect_bad([](Parameters& p) { p.n_eta = 1; }, "n_eta");
  expect_bad([](Parameters& p) { p.w_min = -0.1; }, "w_min");
  expect_bad([](Parameters& p) { p.w_min = 2.0; }, "w_min");
  expect_bad([](Parameters& p) { p.n_a = 1; }, "n_a");
  expect_bad([](Parameters& p) { p.wealth_grid = "log"; }, "wealth_grid");
  expect_bad([](Parameters& p) { p.grid_knee = 1000.0; }, "grid_knee");
  expect_bad([](Parameters& p) { p.tol_vfi = 0.0; }, "tol_vfi");
  expect_bad([](Parameters& p) { p.howard_steps = -1; }, "howard_steps");
  expect_bad([](Parameters& p) { p.damping_j = 0.0; }, "damping_j");
  // r high enough that beta*(1+r) >= 1 breaks wealth boundedness
  expect_bad([](Parameters& p) { p.r = 0.01; }, "r");
}

TEST_CASE("boundary memberships allowed by the model") {
  Parameters p;
  p.lambda_e = 0.0;  // no employed search
  REQUIRE_NOTHROW(validate(p));
  p.lambda_e = 1.0;
  REQUIRE_NOTHROW(validate(p));
  p = Parameters{};
  p.delta = 1.0;  // every match dissolves after one period
  REQUIRE_NOTHROW(validate(p));
}

TEST_CASE("config parse: keys, comments, and unknowns") {
  std::istringstream in(
      "# comment line\n"
      "beta = 0.99  # trailing comment\n"
      "\n"
      "n_a = 7\n"
      "wealth_grid = uniform\n");
  Parameters p = parse_config(in, "test");
  CHECK(p.beta == 0.99);
  CHECK(p.n_a == 7);
  CHECK(p.wealth_grid == "uniform");
  CHECK(p.delta == 0.00633);  // untouched keys keep defaults

  std::istringstream bad("lamda_e = 0.5\n");
  try {
    parse_config(bad, "test");
    FAIL("expected unknown-key rejection");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("lamda_e") != std::string::npos);
  }

  std::istringstream noeq("beta 0.9\n");
  CHECK_THROWS_AS(parse_config(noeq, "test"), std::runtime_error);

  std::istringstream badval("beta = fast\n");
  CHECK_THROWS_AS(parse_config(badval, "test"), std::runtime_error);

  std::istringstream invalid("beta = 1.5\n");
  CHECK_THROWS_AS(parse_config(invalid, "test"), std::invalid_argument);
}

TEST_CASE("save/parse round-trip preserves every field bit-exactly") {
  Parameters p;
  p.beta = 0.9937;
  p.sigma_eps = 1.0 / 3.0;
  p.n_a = 17;
  p.wealth_grid = "uniform";
  p.max_iter_outer = 123;
  std::ostringstream out;
  save_config(p, out);
  std::istringstream in(out.str());
  Parameters q = parse_config(in, "roundtrip");
  std::ostringstream out2;
  save_config(q, out2);
  CHECK(out.str() == out2.str());
  CHECK(q.beta == p.beta);
  CHECK(q.sigma_eps == p.sigma_eps);
  CHECK(q.n_a == p.n_a);
}

TEST_CASE("load_config names a missing path") {
  try {
    load_config("/nonexistent/dir/model.cfg");
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/model.cfg") != std::string::npos);
  }
}
