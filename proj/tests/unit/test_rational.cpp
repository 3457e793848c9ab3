#include <doctest.h>

#include "nadegen/errors.hpp"
#include "nadegen/rational.hpp"

using namespace nadegen;

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3/6") == make_rational(1, 2));
  CHECK(parse_rational("-4") == make_rational(-4));
  CHECK(parse_rational("+7/21") == make_rational(1, 3));
  CHECK(to_string(make_rational(6, 3)) == "2");
  CHECK(to_string(make_rational(-2, 4)) == "-1/2");
  CHECK(to_string(make_rational(0)) == "0");
  CHECK(to_double(make_rational(1, 4)) == 0.25);
}

TEST_CASE("malformed rationals are rejected") {
  for (const char* bad : {"", "1/0", "1/", "/2", "a", "1.5", "1/-2", "1//2", " 1"}) {
    CHECK_THROWS_AS(parse_rational(bad), ValidationError);
  }
  CHECK_THROWS_AS(make_rational(1, 0), ValidationError);
}

TEST_CASE("round trip through the string form") {
  for (std::int64_t p = -20; p <= 20; ++p) {
    for (std::int64_t q = 1; q <= 9; ++q) {
      const Rational r = make_rational(p, q);
      CHECK(parse_rational(to_string(r)) == r);
    }
  }
}
