#include "qfree/uscalar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>

namespace qfree {

namespace {

using CycPowers = std::vector<std::pair<int, int>>;

CycPowers merged(CycPowers a) {
    std::sort(a.begin(), a.end());
    CycPowers out;
    for (const auto& [n, e] : a) {
        if (e == 0) continue;
        if (!out.empty() && out.back().first == n) {
            out.back().second += e;
        } else {
            out.emplace_back(n, e);
        }
    }
    return out;
}

CycPowers sum_powers(const CycPowers& a, const CycPowers& b) {
    CycPowers out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.push_back(b[j++]);
        } else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

CycPowers max_powers(const CycPowers& a, const CycPowers& b) {
    std::map<int, int> m;
    for (const auto& [n, e] : a) m[n] = std::max(m[n], e);
    for (const auto& [n, e] : b) m[n] = std::max(m[n], e);
    return {m.begin(), m.end()};
}

int power_of(const CycPowers& a, int n) {
    for (const auto& [k, e] : a) {
        if (k == n) return e;
    }
    return 0;
}

Laurent cyclotomic_product(const CycPowers& powers) {
    Laurent p(Integer(1));
    for (const auto& [n, e] : powers) {
        for (int i = 0; i < e; ++i) p *= cyclotomic(n);
    }
    return p;
}

/// Split a nonzero Laurent polynomial into sign * u^k * c * prod Phi_n^e * R.
struct Factored {
    int sign = 1;
    int u_power = 0;
    Integer content{1};
    CycPowers cyc;
    Laurent rest{Integer(1)};
};

Factored factor_cyclotomic(const Laurent& p) {
    Factored f;
    f.u_power = p.low();
    Laurent r = p.shifted(-p.low());
    f.sign = r.lead().sign();
    f.content = r.content();
    Integer c = f.content;
    if (f.sign < 0) c = -c;
    r.divexact(c);
    for (int n = 1; n <= UScalar::kMaxCyclotomic && r.high() > 0; ++n) {
        if (totient(n) > r.high()) continue;
        Laurent q;
        int e = 0;
        while (r.high() > 0 && r.divides_by_monic(cyclotomic(n), q)) {
            r = std::move(q);
            ++e;
        }
        if (e > 0) f.cyc.emplace_back(n, e);
    }
    f.rest = std::move(r);
    return f;
}

}  // namespace

UScalar::UScalar(const Rational& r) {
    mpq_class c = r;
    c.canonicalize();
    num_ = Laurent(Integer(c.get_num()));
    den_ = Integer(c.get_den());
}

UScalar UScalar::from_parts(const Laurent& num, const Integer& den, std::vector<std::pair<int, int>> cyc) {
    if (den.is_zero()) throw ArithmeticError("division by zero");
    UScalar s;
    s.num_ = num;
    s.den_ = den;
    if (den.sign() < 0) {
        s.num_ = -s.num_;
        s.den_ = -den;
    }
    s.cyc_ = merged(std::move(cyc));
    s.normalize();
    return s;
}

UScalar UScalar::ratio(const Laurent& num, const Laurent& den) {
    if (den.is_zero()) throw ArithmeticError("division by zero");
    const Factored f = factor_cyclotomic(den);
    UScalar s;
    s.num_ = num.shifted(-f.u_power);
    if (f.sign < 0) s.num_ = -s.num_;
    s.den_ = f.content;
    s.cyc_ = f.cyc;
    s.rest_ = f.rest;
    s.normalize();
    return s;
}

bool UScalar::is_one() const { return num_.is_one() && den_.is_one() && cyc_.empty() && rest_.is_one(); }

bool UScalar::is_rational() const { return num_.is_constant() && cyc_.empty() && rest_.is_one(); }

Rational UScalar::to_rational() const {
    if (!is_rational()) throw std::domain_error("scalar depends on u: " + str());
    Rational r(num_.is_zero() ? mpz_class(0) : num_.coeff(0).to_mpz(), den_.to_mpz());
    r.canonicalize();
    return r;
}

Laurent UScalar::denominator() const {
    Laurent d = cyclotomic_product(cyc_) * rest_;
    d *= den_;
    return d;
}

void UScalar::reduce_integer_content() {
    if (den_.is_one()) return;
    const Integer g = gcd(num_.content(), den_);
    if (!g.is_one()) {
        num_.divexact(g);
        den_.divexact(g);
    }
}

void UScalar::reduce_cyclotomic() {
    if (cyc_.empty()) return;
    CycPowers kept;
    for (auto [n, e] : cyc_) {
        Laurent q;
        while (e > 0 && num_.divides_by_monic(cyclotomic(n), q)) {
            num_ = std::move(q);
            --e;
        }
        if (e > 0) kept.emplace_back(n, e);
    }
    cyc_ = std::move(kept);
}

void UScalar::reduce_residual() {
    if (rest_.is_one()) return;
    const Laurent base = num_.shifted(-num_.low());
    const Laurent g = poly_gcd(base, rest_);
    if (g.high() > 0) {
        num_ = poly_divexact(base, g).shifted(num_.low());
        rest_ = poly_divexact(rest_, g);
    }
}

void UScalar::normalize() {
    if (num_.is_zero()) {
        den_ = Integer(1);
        cyc_.clear();
        rest_ = Laurent(Integer(1));
        return;
    }
    reduce_cyclotomic();
    reduce_residual();
    reduce_integer_content();
}

UScalar& UScalar::operator+=(const UScalar& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (cyc_ == o.cyc_ && rest_ == o.rest_) {
        if (den_ == o.den_) {
            num_ += o.num_;
        } else {
            const Integer l = lcm(den_, o.den_);
            Integer fa = l;
            fa.divexact(den_);
            Integer fb = l;
            fb.divexact(o.den_);
            num_ *= fa;
            num_ += o.num_ * fb;
            den_ = l;
        }
        normalize();
        return *this;
    }
    const Integer l = lcm(den_, o.den_);
    Integer fa = l;
    fa.divexact(den_);
    Integer fb = l;
    fb.divexact(o.den_);
    const CycPowers cl = max_powers(cyc_, o.cyc_);
    CycPowers missing_a;
    CycPowers missing_b;
    for (const auto& [n, e] : cl) {
        if (int d = e - power_of(cyc_, n); d > 0) missing_a.emplace_back(n, d);
        if (int d = e - power_of(o.cyc_, n); d > 0) missing_b.emplace_back(n, d);
    }
    Laurent ra(Integer(1));
    Laurent rb(Integer(1));
    Laurent rl = rest_;
    if (!(rest_ == o.rest_)) {
        if (rest_.is_one()) {
            ra = o.rest_;
            rl = o.rest_;
        } else if (o.rest_.is_one()) {
            rb = rest_;
        } else {
            const Laurent g = poly_gcd(rest_, o.rest_);
            ra = poly_divexact(o.rest_, g);
            rb = poly_divexact(rest_, g);
            rl = rest_ * ra;
        }
    }
    Laurent a = num_ * (cyclotomic_product(missing_a) * ra);
    a *= fa;
    Laurent b = o.num_ * (cyclotomic_product(missing_b) * rb);
    b *= fb;
    num_ = a + b;
    den_ = l;
    cyc_ = cl;
    rest_ = rl;
    normalize();
    return *this;
}

UScalar& UScalar::operator-=(const UScalar& o) { return *this += -o; }

UScalar UScalar::operator-() const {
    UScalar r = *this;
    r.num_ = -r.num_;
    return r;
}

UScalar& UScalar::operator*=(const UScalar& o) {
    if (is_zero()) return *this;
    if (o.is_zero()) return *this = UScalar();
    if (o.is_one()) return *this;
    if (is_one()) return *this = o;
    num_ *= o.num_;
    den_ *= o.den_;
    if (!o.cyc_.empty()) cyc_ = sum_powers(cyc_, o.cyc_);
    if (!o.rest_.is_one()) rest_ = rest_.is_one() ? o.rest_ : rest_ * o.rest_;
    normalize();
    return *this;
}

UScalar UScalar::inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero");
    if (num_.is_monomial()) {
        // 1 / (a u^k / D) = D u^-k / a.
        UScalar r;
        r.num_ = denominator().shifted(-num_.low());
        const Integer& a = num_.trail();
        if (a.sign() < 0) r.num_ = -r.num_;
        r.den_ = abs(a);
        r.normalize();
        return r;
    }
    return ratio(denominator(), num_);
}

UScalar& UScalar::operator/=(const UScalar& o) { return *this *= o.inverse(); }

UScalar UScalar::pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    UScalar result(1);
    UScalar base = *this;
    while (k > 0) {
        if (k & 1) result *= base;
        k >>= 1;
        if (k > 0) base *= base;
    }
    return result;
}

UScalar UScalar::inflated(int k) const {
    return ratio(num_.inflated(k), denominator().inflated(k));
}

Rational UScalar::specialize(const Rational& u0) const {
    if (u0 == 0) throw SpecializationError("cannot specialize at u = 0");
    Rational d = den_.to_mpz();
    for (const auto& [n, e] : cyc_) {
        const Rational v = cyclotomic(n).evaluate(u0);
        for (int i = 0; i < e; ++i) d *= v;
    }
    d *= rest_.evaluate(u0);
    if (d == 0) throw SpecializationError("pole at u = " + u0.get_str());
    Rational r = num_.evaluate(u0) / d;
    r.canonicalize();
    return r;
}

std::string UScalar::str() const {
    const std::string n = num_.str();
    if (den_.is_one() && cyc_.empty() && rest_.is_one()) return n;
    const Laurent d = denominator();
    const std::string ds = d.str();
    const bool wrap_n = num_.length() > 1;
    const bool wrap_d = d.length() > 1 || !d.is_constant();
    std::string out = wrap_n ? "(" + n + ")" : n;
    out += "/";
    out += wrap_d ? "(" + ds + ")" : ds;
    return out;
}

std::size_t UScalar::hash() const {
    std::size_t h = num_.hash();
    h ^= den_.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    for (const auto& [n, e] : cyc_) h ^= std::hash<int>{}(n * 131 + e) + (h << 6) + (h >> 2);
    h ^= rest_.hash() + (h << 6) + (h >> 2);
    return h;
}

std::ostream& operator<<(std::ostream& os, const UScalar& s) { return os << s.str(); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    UScalar parse() {
        UScalar v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("cannot parse scalar '" + s_ + "': " + what + " at offset " +
                                    std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    UScalar expr() {
        UScalar v = term();
        for (;;) {
            if (eat('+')) {
                v += term();
            } else if (eat('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }

    UScalar term() {
        UScalar v = unary();
        for (;;) {
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                v /= unary();
            } else {
                return v;
            }
        }
    }

    UScalar unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    int exponent() {
        skip();
        bool neg = false;
        if (eat('-')) {
            neg = true;
        } else if (eat('(')) {
            const int e = exponent();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        const int e = std::stoi(s_.substr(start, pos_ - start));
        return neg ? -e : e;
    }

    UScalar power() {
        UScalar base = atom();
        if (eat('^')) return base.pow(exponent());
        return base;
    }

    UScalar atom() {
        skip();
        if (eat('(')) {
            UScalar v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (pos_ < s_.size() && s_[pos_] == 'u') {
            ++pos_;
            return UScalar::u_pow(1);
        }
        if (pos_ < s_.size() && s_[pos_] == 'q') {
            ++pos_;
            return UScalar::u_pow(4);
        }
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected number, 'u', 'q' or '('");
        return UScalar(Integer::parse(s_.substr(start, pos_ - start)));
    }

    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace

UScalar UScalar::parse(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------

UScalar u_binomial_inverse(int a, int b) {
    if (a == b) throw ArithmeticError("division by zero");
    if (a < b) return -u_binomial_inverse(b, a);
    // 1/(u^a - u^b) = u^-b / (u^(a-b) - 1) and u^m - 1 = prod_{d | m} Phi_d.
    const int m = a - b;
    CycPowers cyc;
    for (int d = 1; d <= m; ++d) {
        if (m % d == 0) cyc.emplace_back(d, 1);
    }
    return UScalar::from_parts(Laurent(Integer(1), -b), Integer(1), std::move(cyc));
}

UScalar qint_half(int twice_n) {
    if (twice_n == 0) return UScalar();
    if (twice_n < 0) return -qint_half(-twice_n);
    // [n] = (u^m - u^-m)/(u^4 - u^-4) with m = 4n = 2 * twice_n.
    const int m = 2 * twice_n;
    const UScalar num(Laurent::binomial(Integer(1), m, Integer(-1), -m));
    return num * u_binomial_inverse(4, -4);
}

}  // namespace qfree
