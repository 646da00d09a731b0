#include <catch2/catch_amalgamated.hpp>

#include "wagefloor/format.hpp"

using namespace wagefloor;

TEST_CASE("format_double round-trips exactly") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 7.002e20, 0.0, -0.0, 1.4254, 0.00633}) {
    const std::string s = format_double(x);
    REQUIRE(parse_double(s, "x") == x);
  }
}

TEST_CASE("format_double is shortest form for simple values") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(-5.0) == "-5");
}

TEST_CASE("strict parsing rejects trailing garbage") {
  CHECK_THROWS_AS(parse_double("1.5x", "v"), std::runtime_error);
  CHECK_THROWS_AS(parse_double("", "v"), std::runtime_error);
  CHECK_THROWS_AS(parse_long("12.5", "v"), std::runtime_error);
  CHECK(parse_long("-42", "v") == -42);
}

TEST_CASE("parse errors name the offending field") {
  try {
    parse_double("zzz", "beta");
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("beta") != std::string::npos);
  }
}
