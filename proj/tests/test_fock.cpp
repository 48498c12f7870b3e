#include <doctest.h>

#include "qfree/fock.hpp"
#include "qfree/qseries.hpp"

using namespace qfree;

namespace {

BasisMonomial vac(int l1x2, int l2) { return BasisMonomial(l1x2, l2); }
FockVector vec(const std::string& s) { return FockVector(BasisMonomial::parse(s)); }

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("basis enumeration") {
    CHECK(enumerate_basis(0, 0, 0).size() == 1);
    const auto& b1 = enumerate_basis(0, 0, 1);
    REQUIRE(b1.size() == 2);
    CHECK(b1[0].str() == "a[-1]|0,0>");
    CHECK(b1[1].str() == "b[-1]|0,0>");
    CHECK(enumerate_basis(2, 1, 2).size() == 5);
    // Counts against 1/(p;p)^2.
    RationalSeries like({"s", "t"}, 12);
    const RationalSeries e = pochhammer_expand(like, Rational(1), 2, 0, 2);
    const RationalSeries inv2 = (e * e).inv();
    for (int d = 0; d <= 6; ++d) {
        CHECK(Rational(static_cast<long>(enumerate_basis(-1, 0, d).size())) == inv2.coeff(2 * d));
        CHECK(two_colored_partitions(d) == enumerate_basis(0, 0, d).size());
    }
}

TEST_CASE("monomial grammar") {
    const BasisMonomial m = BasisMonomial::parse("a[-2]a[-1]b[-3]|1/2,-1>");
    CHECK(m.l1x2 == 1);
    CHECK(m.l2 == -1);
    CHECK(m.degree() == 6);
    CHECK(m.str() == "a[-2]a[-1]b[-3]|1/2,-1>");
    CHECK(BasisMonomial::parse("a[-1]a[-2]|0,0>").str() == "a[-2]a[-1]|0,0>");
    CHECK(BasisMonomial::parse("|-3/2,-1>") == vac(-3, -1));
    CHECK_THROWS((void)BasisMonomial::parse("a[1]|0,0>"));
    CHECK_THROWS((void)BasisMonomial::parse("|1/3,0>"));
    CHECK_THROWS((void)BasisMonomial::parse("a[-1]"));
}

TEST_CASE("oscillator action") {
    const UScalar expected = -(UScalar::u_pow(4) + UScalar::u_pow(-4)) / (UScalar::u_pow(2) + UScalar::u_pow(-2));
    CHECK(apply_oscillator(Family::a, 1, vec("a[-1]|0,0>")) == FockVector(vac(0, 0), expected));
    CHECK(apply_oscillator(Family::b, 2, vec("b[-2]|0,0>")) == FockVector(vac(0, 0), UScalar(2)));
    CHECK(apply_oscillator(Family::a, 3, FockVector(vac(10, 2))).is_zero());
    CHECK(apply_oscillator(Family::b, 1, vec("b[-1]b[-1]|0,0>")) == FockVector(BasisMonomial::parse("b[-1]|0,0>"), UScalar(2)));
}

TEST_CASE("oscillator commutators on small bases") {
    for (int d = 0; d <= 3; ++d) {
        for (const auto& m : enumerate_basis(1, 0, d)) {
            const FockVector v(m);
            for (Family f : {Family::a, Family::b}) {
                for (Family g : {Family::a, Family::b}) {
                    for (int n = -3; n <= 3; ++n) {
                        for (int k = -3; k <= 3; ++k) {
                            if (n == 0 || k == 0) continue;
                            const FockVector c = apply_oscillator(f, n, apply_oscillator(g, k, v)) -
                                                 apply_oscillator(g, k, apply_oscillator(f, n, v));
                            if (f == g && n + k == 0) {
                                const UScalar br = n > 0 ? oscillator_bracket(f, n) : -oscillator_bracket(f, k);
                                CHECK(c == br * v);
                            } else {
                                CHECK(c.is_zero());
                            }
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("shifts") {
    CHECK(apply_shift(Family::a, 1, FockVector(vac(0, 0))) == FockVector(vac(2, 0)));
    CHECK(apply_shift(Family::b, -1, vec("b[-1]|1,1>")) == vec("b[-1]|1,0>"));
    const FockVector v = vec("a[-2]b[-1]|1/2,3>") + vec("b[-2]|1/2,3>");
    CHECK(apply_shift(Family::a, -1, apply_shift(Family::a, 1, v)) == v);
}

TEST_CASE("grading and weights") {
    CHECK(dbar_of(vac(0, 0)) == 0);
    CHECK(dbar_of(vac(-1, 0)) == Rational(1, 8));
    CHECK(dbar_of(BasisMonomial::parse("b[-1]|1,1>")) == Rational(-1, 2));
    CHECK(weight_of(vac(0, 0)) == Weight{Rational(-1, 2), 0, 0});
    CHECK(weight_of(BasisMonomial::parse("b[-1]|1,1>")) == Weight{Rational(-3, 2), 1, Rational(-1, 2)});
    CHECK(weight_of(vac(-3, -1)) == Weight{1, Rational(-3, 2), Rational(1, 8)});
    CHECK(weight_of(vac(-1, 0)) == Weight{0, Rational(-1, 2), Rational(1, 8)});
    for (int d = 0; d <= 3; ++d) {
        for (const auto& m : enumerate_basis(3, -2, d)) {
            CHECK(weight_of(m).level() == Rational(-1, 2));
            BasisMonomial c = m;
            insert_part(c.a, 2);
            CHECK(dbar_of(c) == dbar_of(m) - 2);
        }
    }
}

TEST_CASE("vacuum extraction") {
    const FockVector v = FockVector(vac(0, 0)) + FockVector(BasisMonomial::parse("a[-1]|0,0>"), UScalar(3));
    CHECK(extract_vacuum(v, 0, 0) == UScalar(1));
    CHECK(extract_vacuum(vec("b[-1]|1,1>"), 2, 1).is_zero());
    CHECK(extract_vacuum(FockVector(vac(0, -1), UScalar::u_pow(4)), 0, -1) == UScalar::u_pow(4));
}

TEST_CASE("linear operator cache") {
    int calls = 0;
    LinearOperator op([&](const BasisMonomial& m) {
        ++calls;
        return apply_oscillator(Family::b, -1, FockVector(m));
    });
    const FockVector v = vec("a[-1]|0,0>") + vec("b[-1]|0,0>");
    (void)op(v);
    (void)op(v);
    CHECK(calls == 2);
    CHECK(op(vec("b[-1]|0,0>")) == vec("b[-1]b[-1]|0,0>"));
}

}
