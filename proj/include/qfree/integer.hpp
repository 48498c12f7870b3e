#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>

#include <gmpxx.h>

namespace qfree {

/// Arbitrary-precision integer with an inline int64 fast path.
///
/// Values that fit in int64 never touch the heap; an operation that would
/// overflow is redone in GMP and the result is demoted again when it fits.
class Integer {
public:
    Integer() = default;
    Integer(std::int64_t v) : small_(v) {}  // NOLINT: implicit by intent
    Integer(int v) : small_(v) {}           // NOLINT
    explicit Integer(const mpz_class& v) { assign_big(v); }

    Integer(const Integer& o) : small_(o.small_) {
        if (o.big_) big_ = std::make_unique<mpz_class>(*o.big_);
    }
    Integer(Integer&&) noexcept = default;
    Integer& operator=(const Integer& o) {
        if (this != &o) {
            small_ = o.small_;
            big_ = o.big_ ? std::make_unique<mpz_class>(*o.big_) : nullptr;
        }
        return *this;
    }
    Integer& operator=(Integer&&) noexcept = default;

    static Integer parse(const std::string& text);

    [[nodiscard]] bool is_small() const { return !big_; }
    [[nodiscard]] std::int64_t small() const { return small_; }
    [[nodiscard]] mpz_class to_mpz() const;
    [[nodiscard]] std::string str() const;

    [[nodiscard]] bool is_zero() const { return !big_ && small_ == 0; }
    [[nodiscard]] bool is_one() const { return !big_ && small_ == 1; }
    [[nodiscard]] int sign() const;

    Integer& operator+=(const Integer& o);
    Integer& operator-=(const Integer& o);
    Integer& operator*=(const Integer& o);
    /// Exact division; the caller guarantees `o` divides `*this`.
    Integer& divexact(const Integer& o);

    friend Integer operator+(Integer a, const Integer& b) { return a += b; }
    friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
    friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
    Integer operator-() const;

    /// a += b * c, the polynomial-multiplication inner step.
    void addmul(const Integer& b, const Integer& c);

    friend bool operator==(const Integer& a, const Integer& b);
    friend std::strong_ordering operator<=>(const Integer& a, const Integer& b);

    [[nodiscard]] std::size_t hash() const;

    friend Integer gcd(const Integer& a, const Integer& b);
    friend Integer abs(const Integer& a);
    /// Floor division and remainder (remainder has the sign of the divisor).
    friend void divmod(const Integer& a, const Integer& b, Integer& q, Integer& r);

private:
    void assign_big(const mpz_class& v);

    std::int64_t small_ = 0;
    std::unique_ptr<mpz_class> big_;
};

Integer lcm(const Integer& a, const Integer& b);

}  // namespace qfree
