#include "doctest.h"
#include "rankone/error.hpp"
#include "rankone/arith.hpp"
#include "rankone/enclosure.hpp"
#include "rankone/json_util.hpp"

using namespace rankone;

TEST_CASE("rational parsing accepts integers, fractions, decimals and exponents") {
  CHECK(rational_from_string("7") == Rational(7));
  CHECK(rational_from_string("3/6") == Rational(1, 2));
  CHECK(rational_from_string("0.25") == Rational(1, 4));
  CHECK(rational_from_string("-1.5") == Rational(-3, 2));
  CHECK(rational_from_string("1e-3").get_d() == doctest::Approx(1e-3));
  CHECK_THROWS_AS(rational_from_string("1/0"), Error);
  CHECK_THROWS_AS(rational_from_string("1.2x"), Error);
}

TEST_CASE("decimal rendering rounds half away from zero") {
  CHECK(to_decimal(Rational(1, 8), 2) == "0.13");
  CHECK(to_decimal(Rational(-1, 8), 2) == "-0.13");
  CHECK(to_decimal(Rational(1, 3), 4) == "0.3333");
  CHECK(to_decimal(Rational(5), 0) == "5");
  CHECK(to_decimal(Rational(-1, 1000), 2) == "0.00");
}

TEST_CASE("128-bit levels round-trip through strings and big integers") {
  Level big = static_cast<Level>(1) << 100;
  CHECK(level_from_string(to_string(big)) == big);
  CHECK(to_level(to_big(big)) == big);
  CHECK(fits_level(to_big(big)));
  CHECK_FALSE(fits_level(ipow(BigInt(2), 130)));
}

TEST_CASE("combinatorial helpers") {
  CHECK(factorial(10) == BigInt(3628800));
  CHECK(binomial(10, 3) == BigInt(120));
  CHECK(ipow(BigInt(3), 5) == BigInt(243));
  CHECK(ceil(Rational(7, 2)) == BigInt(4));
  CHECK(floor(Rational(-7, 2)) == BigInt(-4));
  CHECK(bit_length(BigInt(255)) == 8);
}

TEST_CASE("big integers outside int64 serialize as strings") {
  BigInt huge = ipow(BigInt(10), 30);
  auto j = big_to_json(huge);
  CHECK(j.is_string());
  CHECK(big_from_json(j) == huge);
  CHECK(big_to_json(BigInt(42)).is_number_integer());
}

TEST_CASE("enclosure arithmetic is outward and division refuses zero") {
  Enclosure a(Rational(1), Rational(2)), b(Rational(-1), Rational(3));
  CHECK((a + b) == Enclosure(Rational(0), Rational(5)));
  CHECK((a - b) == Enclosure(Rational(-2), Rational(3)));
  CHECK((a * b) == Enclosure(Rational(-2), Rational(6)));
  CHECK(b.square() == Enclosure(Rational(0), Rational(9)));
  CHECK(a.intersect(Enclosure(Rational(3, 2), Rational(5))) == Enclosure(Rational(3, 2), Rational(2)));
  CHECK_THROWS_AS(a / b, Error);
  CHECK_THROWS_AS(a.intersect(Enclosure(Rational(3))), Error);
  CHECK((a / Enclosure(Rational(2))) == Enclosure(Rational(1, 2), Rational(1)));
}
