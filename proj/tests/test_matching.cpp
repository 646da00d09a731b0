#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "wagefloor/matching.hpp"

using namespace wagefloor;

TEST_CASE("closed-form values at gamma = 0.5") {
  MatchingTech m{0.5};
  CHECK(m.job_finding(0.0) == 0.0);
  CHECK(m.vacancy_filling(0.0) == 1.0);
  // theta = 1: (1 + 1)^(-2) = 1/4 for both rates
  CHECK(m.job_finding(1.0) == Catch::Approx(0.25).margin(1e-15));
  CHECK(m.vacancy_filling(1.0) == Catch::Approx(0.25).margin(1e-15));
  // theta = 4: q = (1+2)^-2 = 1/9, p = 4/9
  CHECK(m.vacancy_filling(4.0) == Catch::Approx(1.0 / 9.0).margin(1e-15));
  CHECK(m.job_finding(4.0) == Catch::Approx(4.0 / 9.0).margin(1e-15));
}

TEST_CASE("identity p = theta * q and unit bounds") {
  MatchingTech m{0.5};
  for (double th : {1e-6, 0.01, 0.5, 0.837, 1.0, 3.779, 4.445, 40.0, 1e4}) {
    const double p = m.job_finding(th), q = m.vacancy_filling(th);
    CHECK(p == Catch::Approx(th * q).epsilon(1e-14));
    CHECK(p > 0.0);
    CHECK(p < 1.0);
    CHECK(q > 0.0);
    CHECK(q < 1.0);
  }
}

TEST_CASE("monotonicity: p increasing, q decreasing") {
  MatchingTech m{0.5};
  double prev_p = -1.0, prev_q = 2.0;
  for (double th = 0.0; th < 30.0; th += 0.37) {
    const double p = m.job_finding(th), q = m.vacancy_filling(th);
    CHECK(p > prev_p);
    CHECK(q < prev_q);
    prev_p = p;
    prev_q = q;
  }
}

TEST_CASE("inverse round-trips the filling rate") {
  MatchingTech m{0.5};
  for (double th : {1e-8, 1e-3, 0.25, 1.0, 7.3, 123.0}) {
    CHECK(m.invert_vacancy_filling(m.vacancy_filling(th)) == Catch::Approx(th).epsilon(1e-10));
  }
  for (double x : {1e-6, 0.1, 0.5, 0.99, 1.0}) {
    CHECK(m.vacancy_filling(m.invert_vacancy_filling(x)) == Catch::Approx(x).epsilon(1e-12));
  }
  CHECK(m.invert_vacancy_filling(1.0) == 0.0);
}

TEST_CASE("domain errors") {
  MatchingTech m{0.5};
  CHECK_THROWS_AS(m.job_finding(-0.1), std::domain_error);
  CHECK_THROWS_AS(m.vacancy_filling(-1e-12), std::domain_error);
  CHECK_THROWS_AS(m.job_finding(std::numeric_limits<double>::infinity()), std::domain_error);
  CHECK_THROWS_AS(m.invert_vacancy_filling(0.0), std::domain_error);
  CHECK_THROWS_AS(m.invert_vacancy_filling(1.0000001), std::domain_error);
  CHECK_THROWS_AS(m.invert_vacancy_filling(-0.5), std::domain_error);
}

TEST_CASE("other elasticities keep the algebra consistent") {
  for (double g : {0.3, 0.5, 1.0, 1.6}) {
    MatchingTech m{g};
    for (double th : {0.2, 1.0, 5.0}) {
      const double q = m.vacancy_filling(th);
      CHECK(q == Catch::Approx(std::pow(1.0 + std::pow(th, g), -1.0 / g)).epsilon(1e-14));
      CHECK(m.invert_vacancy_filling(q) == Catch::Approx(th).epsilon(1e-9));
    }
  }
}
