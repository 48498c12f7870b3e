#include "qfree/qseries.hpp"

#include <cmath>
#include <cstdlib>

namespace qfree {

namespace {

const std::vector<std::string> kST = {"s", "t"};

int sign_of_parity(long k) { return (k % 2 == 0) ? 1 : -1; }

int isqrt(int n) {
    int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::string st_position(int i, int j) { return "s^" + std::to_string(i) + " t^" + std::to_string(j); }

// Compare two series coefficientwise over the union of their supports.
void compare_series(VerificationReport& report, const RationalSeries& lhs, const RationalSeries& rhs,
                    const std::string& label) {
    RationalSeries diff = lhs - rhs;
    std::size_t positions = lhs.terms().size();
    for (const auto& [e, c] : rhs.terms()) {
        if (lhs.terms().find(e) == lhs.terms().end()) ++positions;
    }
    report.count_check(positions == 0 ? 1 : positions);
    for (const auto& [e, c] : diff.terms()) {
        report.fail(Failure{st_position(e[0], e[1]), label, c.get_str()});
    }
}

}  // namespace

UScalarSeries q_binomial_ratio(const UScalar& a, const UScalar& b, const UScalar& base, int order,
                               const std::string& var) {
    UScalarSeries out({var}, order);
    const UScalar ratio = a / b;
    UScalar num(1);    // (a/b; Q)_n
    UScalar den(1);    // (Q; Q)_n
    UScalar bpow(1);   // b^n
    UScalar qpow(1);   // Q^n
    for (int n = 0; n <= order; ++n) {
        out.add_term({n, 0}, num / den * bpow);
        num *= UScalar(1) - ratio * qpow;
        qpow *= base;
        den *= UScalar(1) - qpow;
        bpow *= b;
    }
    return out;
}

RationalSeries euler_cubed(int order) {
    RationalSeries like(kST, 2 * order);
    RationalSeries e = pochhammer_expand(like, Rational(1), 2, 0, 2);
    return e * e * e;
}

// Reduced left side: sum_n sum_m (-1)^(n+m+k) s^(n^2 - m^2 + k^2 + k) t^(n-m), k >= |m|.
//
// Enumeration bounds for s-order N2 = 2*order: with k >= |m|,
// k^2 + k - m^2 >= |m|^2 + |m| - m^2 = |m| >= 0, so the exponent is at least
// n^2 and at least |m|. Hence |n| <= sqrt(N2) and |m| <= N2, and for fixed m
// the exponent increases with k, so the k-loop stops at the first overshoot.
// No excluded (n, m, k) can land at or below N2.
RationalSeries star_lhs(int order, bool mutate_sign) {
    const int n2 = 2 * order;
    RationalSeries out(kST, n2);
    const int nmax = isqrt(n2);
    for (int n = -nmax; n <= nmax; ++n) {
        for (int m = -n2; m <= n2; ++m) {
            for (int k = std::abs(m);; ++k) {
                const int e = n * n - m * m + k * k + k;
                if (e > n2) break;
                int sign = sign_of_parity(n + m + k);
                if (mutate_sign) sign = -sign;
                out.add_term({e, n - m}, Rational(sign));
            }
        }
    }
    return out;
}

VerificationReport check_star_identity(int order, bool mutate_sign) {
    if (order < 0) throw std::invalid_argument("order must be nonnegative");
    VerificationReport report("star-identity");
    report.params()["order"] = order;
    if (mutate_sign) report.params()["mutation"] = "sign";

    // Theta-multiplied form: LHS = (p;p)^3.
    compare_series(report, star_lhs(order, mutate_sign), euler_cubed(order), "theta form");

    // Direct form: (p;p)^-2 * inner = 1 / ((s t; s^2)(s t^-1; s^2)).
    const int n2 = 2 * order;
    RationalSeries inner(kST, n2);
    for (int m = -n2; m <= n2; ++m) {
        for (int k = std::abs(m);; ++k) {
            const int e = k * k + k - m * m;  // >= |m|
            if (e > n2) break;
            int sign = sign_of_parity(k + m);
            if (mutate_sign) sign = -sign;
            inner.add_term({e, -m}, Rational(sign));
        }
    }
    RationalSeries euler = pochhammer_expand(inner, Rational(1), 2, 0, 2);
    RationalSeries lhs = (euler * euler).inv() * inner;
    RationalSeries prod = pochhammer_expand(inner, Rational(1), 1, 1, 2) * pochhammer_expand(inner, Rational(1), 1, -1, 2);
    RationalSeries rhs = prod.inv();
    compare_series(report, lhs, rhs, "direct form");
    report.details()["rhs_coeff_s1_t1"] = rhs.coeff(1, 1).get_str();
    report.details()["constant_term"] = lhs.coeff(0, 0).get_str();
    return report;
}

VerificationReport check_S(int l, int order) {
    if (order < 0) throw std::invalid_argument("order must be nonnegative");
    VerificationReport report("S");
    report.params()["l"] = l;
    report.params()["order"] = order;
    const int n2 = 2 * order;
    RationalSeries s_l({"s"}, n2);
    // Exponent 2ml + k^2 + k with k >= |m| is at least |m|(|m| + 1 - 2|l|), which
    // exceeds n2 once |m| > 2|l| + n2.
    const int mmax = 2 * std::abs(l) + n2 + 1;
    for (int m = -mmax; m <= mmax; ++m) {
        for (int k = std::abs(m);; ++k) {
            const int e = 2 * m * l + k * k + k;
            if (e > n2) break;
            s_l.add_term({e, 0}, Rational(sign_of_parity(k)));
        }
    }
    RationalSeries expected = s_l.empty_like();
    if (l == 0) {
        RationalSeries e3 = pochhammer_expand(s_l, Rational(1), 2, 0, 2);
        expected = e3 * e3 * e3;
        RationalSeries oracle = s_l.empty_like();
        for (int n = 0; n * n + n <= n2; ++n) oracle.add_term({n * n + n, 0}, Rational(sign_of_parity(n) * (2 * n + 1)));
        compare_series(report, oracle, expected, "closed form vs (p;p)^3");
        report.details()["coeff_p1"] = s_l.coeff(2).get_str();
    }
    compare_series(report, s_l, expected, l == 0 ? "S_0 = (p;p)^3" : "S_l = 0");
    return report;
}

VerificationReport check_jacobi_triple(int l, int order) {
    VerificationReport report("jacobi-triple-product");
    report.params()["l"] = l;
    report.params()["order"] = order;
    const int n2 = 2 * order;
    RationalSeries lhs({"s"}, n2);
    // Exponent m^2 + (2l - 1)m exceeds n2 once |m| > |2l - 1| + n2.
    const int mmax = std::abs(2 * l - 1) + n2 + 1;
    for (int m = -mmax; m <= mmax; ++m) {
        const int e = 2 * m * l + m * m - m;
        if (e <= n2) lhs.add_term({e, 0}, Rational(sign_of_parity(m)));
    }
    RationalSeries rhs = pochhammer_expand(lhs, Rational(1), 2, 0, 2) * pochhammer_expand(lhs, Rational(1), 2 * l, 0, 2);
    if (!rhs.is_zero()) rhs *= pochhammer_expand(lhs, Rational(1), 2 - 2 * l, 0, 2);
    if (rhs.is_zero()) report.note("right side vanishes: one Pochhammer factor contains (1 - p^0)");
    compare_series(report, lhs, rhs, "triple product");
    return report;
}

RationalSeries product_character_12(int order, Window window) {
    RationalSeries like(kST, 2 * order);
    RationalSeries prod = pochhammer_expand(like, Rational(1), 1, 1, 2) * pochhammer_expand(like, Rational(1), 1, -1, 2);
    return prod.inv().restricted(2 * order, window);
}

RationalSeries product_character_34(int order, Window window) {
    // The t^-1 factors contribute at most `order` negative t-steps below s-order 2*order,
    // so computing in a padded window keeps the requested one exact.
    const Window padded{std::min(window.lo, 0) - order, std::max(window.hi, 0) + order};
    RationalSeries like(kST, 2 * order, padded);
    RationalSeries a = pochhammer_expand(like, Rational(1), 0, 1, 2).inv();
    RationalSeries b = pochhammer_expand(like, Rational(1), 2, -1, 2).inv();
    return (a * b).restricted(2 * order, window);
}

}  // namespace qfree
