#include <doctest.h>

#include "qfree/qseries.hpp"

using namespace qfree;

namespace {

RationalSeries x_series(int order) { return RationalSeries({"x"}, order); }

// Euler's pentagonal theorem: exponents k(3k -+ 1)/2 with sign (-1)^k.
RationalSeries pentagonal(int order_p) {
    RationalSeries out({"s", "t"}, 2 * order_p);
    for (int k = -order_p - 1; k <= order_p + 1; ++k) {
        const int e = k * (3 * k - 1) / 2;
        if (e <= order_p) out.add_term({2 * e, 0}, Rational(k % 2 == 0 ? 1 : -1));
    }
    return out;
}

}  // namespace

TEST_SUITE("qseries") {

TEST_CASE("geometric series and inverse pair") {
    RationalSeries one_minus_x = RationalSeries::constant(x_series(3), 1);
    one_minus_x.add_term({1, 0}, -1);
    const RationalSeries inv = one_minus_x.inv();
    for (int i = 0; i <= 3; ++i) CHECK(inv.coeff(i) == 1);
    CHECK(inv.terms().size() == 4);
    const RationalSeries prod = one_minus_x * inv;
    CHECK(prod == RationalSeries::constant(x_series(3), 1));
}

TEST_CASE("two-variable product inverse") {
    RationalSeries like({"s", "t"}, 4);
    RationalSeries a = RationalSeries::constant(like, 1);
    a.add_term({1, 1}, -1);
    RationalSeries b = RationalSeries::constant(like, 1);
    b.add_term({1, -1}, -1);
    const RationalSeries inv = (a * b).inv();
    CHECK(inv.coeff(1, 1) == 1);
    CHECK(inv.coeff(2, 2) == 1);
    CHECK(inv.coeff(2, 0) == 1);
    CHECK(inv.coeff(1, 0) == 0);
}

TEST_CASE("non-invertible and mismatched series") {
    RationalSeries x = RationalSeries::monomial(x_series(3), 1, 1);
    CHECK_THROWS_AS((void)x.inv(), std::domain_error);
    CHECK_THROWS_AS((void)(x + x_series(4)), std::invalid_argument);
    CHECK_THROWS_AS((void)(x + RationalSeries({"y"}, 3)), std::invalid_argument);
}

TEST_CASE("pochhammer expansions") {
    RationalSeries like({"s", "t"}, 4);
    const RationalSeries p = pochhammer_expand(like, Rational(1), 1, 1, 2);
    CHECK(p.coeff(0, 0) == 1);
    CHECK(p.coeff(1, 1) == -1);
    CHECK(p.coeff(3, 1) == -1);
    CHECK(p.coeff(4, 2) == 1);
    CHECK(pochhammer_expand(like, Rational(0), 1, 1, 2) == RationalSeries::constant(like, 1));
    for (int order = 1; order <= 12; ++order) {
        RationalSeries l({"s", "t"}, 2 * order);
        const RationalSeries euler = pochhammer_expand(l, Rational(1), 2, 0, 2);
        CHECK(euler == pentagonal(order));
        CHECK(euler * euler.inv() == RationalSeries::constant(l, 1));
    }
    CHECK_THROWS_AS((void)pochhammer_expand(like, Rational(1), 1, 0, 0), std::domain_error);
    CHECK(pochhammer_expand(like, Rational(1), -2, 0, 2).is_zero());
}

TEST_CASE("star identity") {
    CHECK(check_star_identity(0).passed());
    const VerificationReport r2 = check_star_identity(2);
    CHECK(r2.passed());
    CHECK(r2.to_json()["details"]["rhs_coeff_s1_t1"] == "1");
    CHECK(check_star_identity(8).passed());
    const VerificationReport bad = check_star_identity(2, true);
    CHECK_FALSE(bad.passed());
    CHECK(bad.failure_count() > 0);
}

TEST_CASE("S_l sums") {
    const VerificationReport s0 = check_S(0, 8);
    CHECK(s0.passed());
    CHECK(s0.to_json()["details"]["coeff_p1"] == "-3");
    CHECK(check_S(0, 0).passed());
    for (int l = -5; l <= 5; ++l) CHECK(check_S(l, 8).passed());
}

TEST_CASE("Jacobi triple product step") {
    for (int l = 0; l <= 2; ++l) CHECK(check_jacobi_triple(l, 8).passed());
}

TEST_CASE("character product forms") {
    const RationalSeries ch34 = product_character_34(6, Window{-6, 6});
    for (const auto& [e, c] : ch34.terms()) CHECK(c > 0);
    CHECK(ch34.coeff(0, 0) == 1);
    CHECK(ch34.coeff(0, 3) == 1);
    const RationalSeries ch12 = product_character_12(2, Window{-4, 4});
    CHECK(ch12.coeff(1, 1) == 1);
    CHECK(ch12.coeff(2, 0) == 1);
}

TEST_CASE("q-binomial ratio") {
    const UScalar q = UScalar::u_pow(4);
    const UScalarSeries s = q_binomial_ratio(q.pow(3), q, q.pow(4), 2);
    // (q^3 z; q^4) / (q z; q^4): first coefficient (q - q^3)/(1 - q^4).
    CHECK(s.coeff(0) == UScalar(1));
    CHECK(s.coeff(1) == (q - q.pow(3)) / (UScalar(1) - q.pow(4)));
}

TEST_CASE("json dump") {
    RationalSeries a = RationalSeries::constant(x_series(2), 1);
    a.add_term({2, 0}, Rational(-1, 2));
    const Json j = a.to_json();
    CHECK(j["vars"][0] == "x");
    CHECK(j["order"] == 2);
    CHECK(j["terms"][1]["e"][0] == 2);
    CHECK(j["terms"][1]["c"] == "-1/2");
}

}
