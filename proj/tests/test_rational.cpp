#include "hlsum/rational.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace hlsum;

TEST_CASE("parse_rational handles integers, fractions, and decimals") {
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("-4/3") == Rational(-4, 3));
    CHECK(parse_rational("1.5") == Rational(3, 2));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("-0.5") == Rational(-1, 2));
    CHECK(parse_rational("10/4") == Rational(5, 2));
}

TEST_CASE("parse_rational rejects malformed input") {
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("2/"), std::invalid_argument);
}

TEST_CASE("rational rendering and conversion") {
    CHECK(to_string(Rational(4, 3)) == "4/3");
    CHECK(to_string(Rational(5)) == "5");
    CHECK(to_string(Rational(-1, 2)) == "-1/2");
    CHECK(to_double(Rational(1, 2)) == 0.5);
    CHECK(to_int64_checked(BigInt(42)) == 42);
    CHECK_THROWS_AS(to_int64_checked(BigInt(1) << 70), std::overflow_error);
}

TEST_CASE("extended exponents: infinity, reciprocal, comparisons") {
    const ExtendedExponent inf = ExtendedExponent::infinity();
    CHECK(inf.is_infinite());
    CHECK(inf.reciprocal() == Rational(0));
    CHECK(inf.str() == "inf");
    CHECK_THROWS_AS(inf.value(), std::logic_error);

    const ExtendedExponent four(4);
    CHECK_FALSE(four.is_infinite());
    CHECK(four.reciprocal() == Rational(1, 4));
    CHECK(four.str() == "4");
    CHECK(four.as_double() == 4.0);

    CHECK(four < inf);
    CHECK(inf > four);
    CHECK(inf == ExtendedExponent::infinity());
    CHECK(four >= Rational(4));
    CHECK(four <= Rational(4));
    CHECK(inf > Rational(1000000));
    CHECK_FALSE(inf <= Rational(1000000));

    CHECK_THROWS_AS(ExtendedExponent(Rational(1, 2)), std::domain_error);
}

TEST_CASE("parse_exponent accepts inf spellings and rationals") {
    CHECK(parse_exponent("inf").is_infinite());
    CHECK(parse_exponent("Infinity").is_infinite());
    CHECK(parse_exponent("oo").is_infinite());
    CHECK(parse_exponent("4/3") == ExtendedExponent(Rational(4, 3)));
    CHECK(parse_exponent("2.5") == ExtendedExponent(Rational(5, 2)));
    CHECK_THROWS_AS(parse_exponent("0.5"), std::domain_error);
    CHECK_THROWS_AS(parse_exponent("nope"), std::invalid_argument);
}
