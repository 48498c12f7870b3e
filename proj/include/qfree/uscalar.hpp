#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qfree/integer.hpp"
#include "qfree/laurent.hpp"

namespace qfree {

/// Raised on division by zero in the coefficient field.
class ArithmeticError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a scalar has a pole at the requested specialization point.
class SpecializationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

using Rational = mpq_class;

/// Exact element of Q(u) where u = q^(1/4).
///
/// Canonical form N(u) / (c * prod Phi_n(u)^e_n * R(u)):
///   - N is an integer Laurent polynomial,
///   - c > 0 and gcd(content(N), c) = 1,
///   - Phi_n are cyclotomic polynomials, none of which divides N,
///   - R is a primitive polynomial with positive leading coefficient,
///     R(0) != 0, free of cyclotomic factors Phi_n with n <= kMaxCyclotomic,
///     and coprime to N. It is 1 for everything the engine builds itself.
/// Equality is therefore structural.
class UScalar {
public:
    static constexpr int kMaxCyclotomic = 4096;

    UScalar() = default;
    UScalar(int v) : num_(Integer(v)) {}                    // NOLINT
    UScalar(std::int64_t v) : num_(Integer(v)) {}           // NOLINT
    UScalar(const Integer& v) : num_(v) {}                  // NOLINT
    explicit UScalar(const Laurent& numerator) : num_(numerator) {}
    explicit UScalar(const Rational& r);

    /// c * u^k.
    static UScalar monomial(const Integer& c, int k) { return UScalar(Laurent(c, k)); }
    static UScalar u_pow(int k) { return monomial(Integer(1), k); }
    /// q^(k/2) = u^(2k), the common half-power of q.
    static UScalar q_half_pow(int k) { return u_pow(2 * k); }
    /// General ratio num / den; den must be nonzero.
    static UScalar ratio(const Laurent& num, const Laurent& den);
    /// 1 / prod_n Phi_n^e: a scalar whose denominator is already factored.
    static UScalar from_parts(const Laurent& num, const Integer& den,
                              std::vector<std::pair<int, int>> cyclotomic_powers);

    static UScalar parse(const std::string& text);

    [[nodiscard]] bool is_zero() const { return num_.is_zero(); }
    [[nodiscard]] bool is_one() const;
    /// No u dependence (an element of Q).
    [[nodiscard]] bool is_rational() const;
    [[nodiscard]] Rational to_rational() const;

    [[nodiscard]] const Laurent& numerator() const { return num_; }
    [[nodiscard]] const Integer& denominator_content() const { return den_; }
    [[nodiscard]] const std::vector<std::pair<int, int>>& cyclotomic_powers() const { return cyc_; }
    [[nodiscard]] const Laurent& residual_denominator() const { return rest_; }
    /// Fully expanded denominator polynomial c * prod Phi_n^e * R.
    [[nodiscard]] Laurent denominator() const;

    UScalar& operator+=(const UScalar& o);
    UScalar& operator-=(const UScalar& o);
    UScalar& operator*=(const UScalar& o);
    UScalar& operator/=(const UScalar& o);
    UScalar operator-() const;
    friend UScalar operator+(UScalar a, const UScalar& b) { return a += b; }
    friend UScalar operator-(UScalar a, const UScalar& b) { return a -= b; }
    friend UScalar operator*(UScalar a, const UScalar& b) { return a *= b; }
    friend UScalar operator/(UScalar a, const UScalar& b) { return a /= b; }

    [[nodiscard]] UScalar inverse() const;
    [[nodiscard]] UScalar pow(int k) const;
    /// Substitute u -> u^k (k >= 1); used to turn q-series into u-series.
    [[nodiscard]] UScalar inflated(int k) const;

    /// Exact value at u = u0. Throws SpecializationError at a pole or u0 = 0.
    [[nodiscard]] Rational specialize(const Rational& u0) const;

    /// "(-u^2 + 3)/(u^4 - 1)"; exponents descending, denominator expanded.
    [[nodiscard]] std::string str() const;

    friend bool operator==(const UScalar& a, const UScalar& b) = default;
    [[nodiscard]] std::size_t hash() const;

private:
    void normalize();
    void reduce_integer_content();
    void reduce_cyclotomic();
    void reduce_residual();

    Laurent num_;
    Integer den_{1};
    std::vector<std::pair<int, int>> cyc_;  // sorted by n, exponents > 0
    Laurent rest_{Integer(1)};
};

std::ostream& operator<<(std::ostream& os, const UScalar& s);

/// Quantum integer [n] = (q^n - q^-n)/(q - q^-1) for half-integer n = twice_n / 2.
UScalar qint_half(int twice_n);
/// [n] for integer n.
inline UScalar qint(int n) { return qint_half(2 * n); }

/// u^a - u^b with its cyclotomic factorization recorded; a != b.
/// Building denominators through this keeps them in factored form.
UScalar u_binomial_inverse(int a, int b);

struct UScalarHash {
    std::size_t operator()(const UScalar& s) const { return s.hash(); }
};

}  // namespace qfree
