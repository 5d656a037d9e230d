#include "hml/rational.hpp"

#include <doctest.h>

using hml::Rational;

TEST_SUITE("rational") {

TEST_CASE("normalization and ordering") {
    Rational r(6, -4);
    CHECK(r.num() == hml::int128(-3));
    CHECK(r.den() == hml::int128(2));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-5, 3) < Rational(-1, 3));
    CHECK(Rational(0, 7) == Rational(0));
}

TEST_CASE("arithmetic") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(2, 3) / Rational(-4, 9) == Rational(-3, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), hml::RationalOverflowError);
}

TEST_CASE("exact dyadic doubles round-trip") {
    for (double v : {0.5, -0.375, 8.966444820400003, 1e-3, 123456.75, 0.0}) {
        const Rational r = Rational::from_double_exact(v);
        CHECK(r.to_double() == v);
    }
    // the torus fixture's c3 has the expected dyadic representation
    const Rational c3 = Rational::from_double_exact(8.966444820400003);
    CHECK(c3.num_i64() == 2523829846999473LL);
    CHECK(c3.den_i64() == 281474976710656LL);
}

TEST_CASE("exact square roots") {
    CHECK(*Rational(9, 4).sqrt_exact() == Rational(3, 2));
    CHECK(*Rational(0).sqrt_exact() == Rational(0));
    CHECK(*Rational(144).sqrt_exact() == Rational(12));
    CHECK(!Rational(2).sqrt_exact());
    CHECK(!Rational(9, 5).sqrt_exact());
    CHECK(!Rational(-4).sqrt_exact());
}

TEST_CASE("rational gcd drives period lattices") {
    CHECK(hml::rational_gcd(Rational(2), hml::rational_gcd(Rational(3), Rational(-5))) == Rational(1));
    CHECK(hml::rational_gcd(Rational(1, 2), hml::rational_gcd(Rational(3, 2), Rational(-2))) == Rational(1, 2));
    CHECK(hml::rational_gcd(Rational(15), hml::rational_gcd(Rational(-1), Rational(2))) == Rational(1));
}

TEST_CASE("overflow is detected, not wrapped") {
    const Rational big(hml::int128(1) << 100);
    CHECK_THROWS_AS(big * big, hml::RationalOverflowError);
}

} // TEST_SUITE
