#include "qfree/integer.hpp"

#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qfree {

namespace {

mpz_class mpz_of(std::int64_t v) { return mpz_class(static_cast<long>(v)); }

}  // namespace

void Integer::assign_big(const mpz_class& v) {
    if (v.fits_slong_p()) {
        small_ = v.get_si();
        big_.reset();
    } else {
        small_ = 0;
        big_ = std::make_unique<mpz_class>(v);
    }
}

Integer Integer::parse(const std::string& text) {
    mpz_class v;
    if (text.empty() || v.set_str(text, 10) != 0) {
        throw std::invalid_argument("not an integer: '" + text + "'");
    }
    return Integer(v);
}

mpz_class Integer::to_mpz() const { return big_ ? *big_ : mpz_of(small_); }

std::string Integer::str() const { return big_ ? big_->get_str() : std::to_string(small_); }

int Integer::sign() const {
    if (big_) return sgn(*big_);
    return (small_ > 0) - (small_ < 0);
}

Integer& Integer::operator+=(const Integer& o) {
    if (!big_ && !o.big_) {
        std::int64_t r;
        if (!__builtin_add_overflow(small_, o.small_, &r)) {
            small_ = r;
            return *this;
        }
    }
    assign_big(to_mpz() + o.to_mpz());
    return *this;
}

Integer& Integer::operator-=(const Integer& o) {
    if (!big_ && !o.big_) {
        std::int64_t r;
        if (!__builtin_sub_overflow(small_, o.small_, &r)) {
            small_ = r;
            return *this;
        }
    }
    assign_big(to_mpz() - o.to_mpz());
    return *this;
}

Integer& Integer::operator*=(const Integer& o) {
    if (!big_ && !o.big_) {
        std::int64_t r;
        if (!__builtin_mul_overflow(small_, o.small_, &r)) {
            small_ = r;
            return *this;
        }
    }
    assign_big(to_mpz() * o.to_mpz());
    return *this;
}

void Integer::addmul(const Integer& b, const Integer& c) {
    if (!big_ && !b.big_ && !c.big_) {
        std::int64_t p;
        std::int64_t r;
        if (!__builtin_mul_overflow(b.small_, c.small_, &p) && !__builtin_add_overflow(small_, p, &r)) {
            small_ = r;
            return;
        }
    }
    assign_big(to_mpz() + b.to_mpz() * c.to_mpz());
}

Integer& Integer::divexact(const Integer& o) {
    if (o.is_zero()) throw std::domain_error("integer division by zero");
    if (!big_ && !o.big_) {
        // INT64_MIN / -1 is the only overflowing case.
        if (!(small_ == std::numeric_limits<std::int64_t>::min() && o.small_ == -1)) {
            small_ /= o.small_;
            return *this;
        }
    }
    mpz_class r;
    mpz_divexact(r.get_mpz_t(), to_mpz().get_mpz_t(), o.to_mpz().get_mpz_t());
    assign_big(r);
    return *this;
}

Integer Integer::operator-() const {
    if (!big_ && small_ != std::numeric_limits<std::int64_t>::min()) return Integer(-small_);
    return Integer(mpz_class(-to_mpz()));
}

bool operator==(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ == b.small_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical: a big value never fits in int64
}

std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
    const int c = cmp(a.to_mpz(), b.to_mpz());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t Integer::hash() const {
    if (!big_) return std::hash<std::int64_t>{}(small_);
    return std::hash<std::string>{}(big_->get_str(16));
}

Integer gcd(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_ && a.small_ != std::numeric_limits<std::int64_t>::min() &&
        b.small_ != std::numeric_limits<std::int64_t>::min()) {
        return Integer(std::gcd(a.small_, b.small_));
    }
    mpz_class r;
    mpz_gcd(r.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return Integer(r);
}

Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

void divmod(const Integer& a, const Integer& b, Integer& q, Integer& r) {
    if (b.is_zero()) throw std::domain_error("integer division by zero");
    mpz_class qq;
    mpz_class rr;
    mpz_fdiv_qr(qq.get_mpz_t(), rr.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    q = Integer(qq);
    r = Integer(rr);
}

Integer lcm(const Integer& a, const Integer& b) {
    if (a.is_zero() || b.is_zero()) return Integer(0);
    Integer g = gcd(a, b);
    Integer r = abs(a);
    r.divexact(g);
    r *= abs(b);
    return r;
}

}  // namespace qfree
