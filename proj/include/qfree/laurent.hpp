#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qfree/integer.hpp"

namespace qfree {

/// Integer-coefficient Laurent polynomial in one variable.
///
/// Stored densely from the lowest nonzero exponent; the zero polynomial has
/// no coefficients. Leading and trailing coefficients are always nonzero.
class Laurent {
public:
    Laurent() = default;
    Laurent(Integer c, int exponent = 0);  // NOLINT: constants convert
    Laurent(int low, std::vector<Integer> coeffs);

    static Laurent monomial(Integer c, int exponent) { return Laurent(std::move(c), exponent); }
    /// c * u^a - c * u^b style helper used all over the place.
    static Laurent binomial(Integer c1, int e1, Integer c2, int e2);

    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    [[nodiscard]] bool is_one() const { return low_ == 0 && coeffs_.size() == 1 && coeffs_[0].is_one(); }
    [[nodiscard]] bool is_monomial() const { return coeffs_.size() == 1; }
    [[nodiscard]] bool is_constant() const { return is_zero() || (low_ == 0 && coeffs_.size() == 1); }

    [[nodiscard]] int low() const { return low_; }
    [[nodiscard]] int high() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] std::size_t length() const { return coeffs_.size(); }
    [[nodiscard]] const std::vector<Integer>& coeffs() const { return coeffs_; }
    [[nodiscard]] Integer coeff(int exponent) const;
    [[nodiscard]] const Integer& lead() const { return coeffs_.back(); }
    [[nodiscard]] const Integer& trail() const { return coeffs_.front(); }

    /// gcd of all coefficients (nonnegative; zero for the zero polynomial).
    [[nodiscard]] Integer content() const;

    Laurent& operator+=(const Laurent& o);
    Laurent& operator-=(const Laurent& o);
    Laurent& operator*=(const Laurent& o);
    Laurent& operator*=(const Integer& c);
    Laurent operator-() const;
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
    friend Laurent operator*(const Laurent& a, const Laurent& b);
    friend Laurent operator*(Laurent a, const Integer& c) { return a *= c; }

    /// Multiply by u^k.
    [[nodiscard]] Laurent shifted(int k) const;
    /// Coefficientwise exact division by an integer.
    Laurent& divexact(const Integer& c);
    /// Substitute u -> -u.
    [[nodiscard]] Laurent negated_variable() const;
    /// Substitute u -> u^k for k >= 1.
    [[nodiscard]] Laurent inflated(int k) const;

    /// Exact quotient by a monic integer polynomial (low() == 0) if it divides
    /// evenly; returns false and leaves `quotient` unspecified otherwise.
    [[nodiscard]] bool divides_by_monic(const Laurent& monic, Laurent& quotient) const;

    [[nodiscard]] mpq_class evaluate(const mpq_class& u) const;

    /// Human-readable rendering in descending exponent order, e.g. "-u^2 + 3".
    [[nodiscard]] std::string str() const;

    friend bool operator==(const Laurent& a, const Laurent& b) = default;
    [[nodiscard]] std::size_t hash() const;

private:
    void trim();

    int low_ = 0;
    std::vector<Integer> coeffs_;
};

/// gcd over Q[u] of two polynomials with nonzero constant term, returned primitive with
/// positive leading coefficient. Both arguments must be nonzero.
Laurent poly_gcd(const Laurent& a, const Laurent& b);

/// Exact quotient a / b for ordinary polynomials with b | a over Z[u].
/// Throws if the division is not exact.
Laurent poly_divexact(const Laurent& a, const Laurent& b);

/// n-th cyclotomic polynomial, cached.
const Laurent& cyclotomic(int n);
/// Euler's totient, used to bound cyclotomic factor searches.
int totient(int n);

}  // namespace qfree
