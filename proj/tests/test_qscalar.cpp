#include <doctest.h>

#include <random>

#include "qfree/uscalar.hpp"

using qfree::Laurent;
using qfree::Rational;
using qfree::UScalar;

namespace {

UScalar u(int k) { return UScalar::u_pow(k); }

UScalar random_scalar(std::mt19937& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> pick(0, 5);
    UScalar num = 0;
    for (int e = -2; e <= 2; ++e) num += UScalar(coef(rng)) * u(e);
    static const int dens[] = {1, 2, 4, 6, 8, 12};
    const int a = dens[pick(rng)];
    UScalar den = qfree::u_binomial_inverse(a, -a).inverse();
    if (pick(rng) % 2 == 0) den *= UScalar(coef(rng) == 0 ? 5 : 3);
    return num / den;
}

}  // namespace

TEST_SUITE("qscalar") {

TEST_CASE("basic arithmetic") {
    CHECK((u(1) + (-u(1))).is_zero());
    CHECK((u(2) * u(-2)).is_one());
    CHECK((u(8) - u(-8)) / (u(4) - u(-4)) == u(4) + u(-4));
}

TEST_CASE("quantum integers") {
    CHECK(qfree::qint(1).is_one());
    CHECK(qfree::qint(0).is_zero());
    CHECK(qfree::qint_half(-1) == -(u(2) + u(-2)).inverse());
    CHECK(qfree::qint(2) == u(4) + u(-4));
    CHECK(qfree::qint(-3) == -qfree::qint(3));
}

TEST_CASE("quantum integer recursion") {
    // [n+1] = (q + q^-1)[n] - [n-1] for half-integer steps of the index.
    const UScalar sq = u(4) + u(-4);
    for (int t = -12; t <= 8; ++t) {
        CHECK(qfree::qint_half(t + 4) == sq * qfree::qint_half(t + 2) - qfree::qint_half(t));
    }
    const UScalar qq = u(4) - u(-4);
    for (int t = -12; t <= 12; ++t) {
        CHECK(qfree::qint_half(t) * qq == u(2 * t) - u(-2 * t));
    }
}

TEST_CASE("specialization") {
    CHECK((u(4) + u(-4)).specialize(Rational(1)) == 2);
    CHECK(qfree::qint(2).specialize(Rational(2)) == Rational(257, 16));
    const UScalar pole = (u(1) - UScalar(1)).inverse();
    CHECK_THROWS_AS((void)pole.specialize(Rational(1)), qfree::SpecializationError);
    CHECK_THROWS_AS((void)u(1).specialize(Rational(0)), qfree::SpecializationError);
    CHECK_THROWS_AS((void)(UScalar(1) / UScalar(0)), qfree::ArithmeticError);
}

TEST_CASE("field axioms on random elements") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 60; ++trial) {
        const UScalar a = random_scalar(rng);
        const UScalar b = random_scalar(rng);
        const UScalar c = random_scalar(rng);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
        if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
        const Rational at(3, 2);
        CHECK((a * b).specialize(at) == a.specialize(at) * b.specialize(at));
        CHECK((a + b).specialize(at) == a.specialize(at) + b.specialize(at));
    }
}

TEST_CASE("general denominators") {
    const UScalar a = UScalar::ratio(Laurent::binomial(1, 2, 1, 0), Laurent::binomial(2, 1, 1, 0));
    const UScalar b = UScalar::ratio(Laurent(1), Laurent::binomial(1, 2, 3, 0));
    const UScalar s = a + b - b;
    CHECK(s == a);
    CHECK((a / a).is_one());
    CHECK(a.residual_denominator() == Laurent::binomial(2, 1, 1, 0));
    CHECK(a.specialize(Rational(1)) == Rational(2, 3));
}

TEST_CASE("rendering and parsing") {
    const UScalar x = (UScalar(3) - u(2)) / (u(4) - UScalar(1));
    CHECK(x.str() == "(-u^2 + 3)/(u^4 - 1)");
    CHECK((UScalar(3) * u(2)).str() == "3*u^2");
    CHECK(u(-4).str() == "u^-4");
    CHECK(UScalar(Rational(1, 2)).str() == "1/2");
    CHECK(UScalar(0).str() == "0");
    CHECK(UScalar::parse(x.str()) == x);
    CHECK(UScalar::parse("q^-1") == u(-4));
    CHECK(UScalar::parse("(q - q^(-1))*2/4") == (u(4) - u(-4)) / UScalar(2));
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const UScalar a = random_scalar(rng);
        CHECK(UScalar::parse(a.str()) == a);
    }
    CHECK_THROWS((void)UScalar::parse("u +"));
    CHECK_THROWS((void)UScalar::parse("x"));
}

}
