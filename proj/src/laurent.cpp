#include "qfree/laurent.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace qfree {

Laurent::Laurent(Integer c, int exponent) {
    if (!c.is_zero()) {
        low_ = exponent;
        coeffs_.push_back(std::move(c));
    }
}

Laurent::Laurent(int low, std::vector<Integer> coeffs) : low_(low), coeffs_(std::move(coeffs)) { trim(); }

Laurent Laurent::binomial(Integer c1, int e1, Integer c2, int e2) {
    Laurent a(std::move(c1), e1);
    a += Laurent(std::move(c2), e2);
    return a;
}

void Laurent::trim() {
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first].is_zero()) ++first;
    if (first == coeffs_.size()) {
        coeffs_.clear();
        low_ = 0;
        return;
    }
    std::size_t last = coeffs_.size();
    while (coeffs_[last - 1].is_zero()) --last;
    if (first > 0 || last < coeffs_.size()) {
        coeffs_.erase(coeffs_.begin() + static_cast<std::ptrdiff_t>(last), coeffs_.end());
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
        low_ += static_cast<int>(first);
    }
}

Integer Laurent::coeff(int exponent) const {
    if (is_zero() || exponent < low_ || exponent > high()) return Integer(0);
    return coeffs_[static_cast<std::size_t>(exponent - low_)];
}

Integer Laurent::content() const {
    Integer g(0);
    for (const auto& c : coeffs_) {
        g = gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

Laurent& Laurent::operator+=(const Laurent& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    const int lo = std::min(low_, o.low_);
    const int hi = std::max(high(), o.high());
    if (lo < low_ || hi > high()) {
        std::vector<Integer> c(static_cast<std::size_t>(hi - lo + 1));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            c[static_cast<std::size_t>(low_ - lo) + i] = std::move(coeffs_[i]);
        }
        coeffs_ = std::move(c);
        low_ = lo;
    }
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
        coeffs_[static_cast<std::size_t>(o.low_ - low_) + i] += o.coeffs_[i];
    }
    trim();
    return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) { return *this += -o; }

Laurent Laurent::operator-() const {
    Laurent r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

Laurent operator*(const Laurent& a, const Laurent& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Integer> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        const Integer& ai = a.coeffs_[i];
        if (ai.is_zero()) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j].addmul(ai, b.coeffs_[j]);
    }
    return Laurent(a.low_ + b.low_, std::move(c));
}

Laurent& Laurent::operator*=(const Laurent& o) { return *this = *this * o; }

Laurent& Laurent::operator*=(const Integer& c) {
    if (c.is_zero()) {
        coeffs_.clear();
        low_ = 0;
        return *this;
    }
    if (c.is_one()) return *this;
    for (auto& x : coeffs_) x *= c;
    return *this;
}

Laurent Laurent::shifted(int k) const {
    Laurent r = *this;
    if (!r.is_zero()) r.low_ += k;
    return r;
}

Laurent& Laurent::divexact(const Integer& c) {
    if (c.is_one()) return *this;
    for (auto& x : coeffs_) x.divexact(c);
    return *this;
}

Laurent Laurent::negated_variable() const {
    Laurent r = *this;
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i) {
        if (((r.low_ + static_cast<int>(i)) & 1) != 0) r.coeffs_[i] = -r.coeffs_[i];
    }
    return r;
}

Laurent Laurent::inflated(int k) const {
    if (k < 1) throw std::invalid_argument("inflation factor must be positive");
    if (is_zero() || k == 1) return *this;
    std::vector<Integer> c((coeffs_.size() - 1) * static_cast<std::size_t>(k) + 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i * static_cast<std::size_t>(k)] = coeffs_[i];
    return Laurent(low_ * k, std::move(c));
}

bool Laurent::divides_by_monic(const Laurent& monic, Laurent& quotient) const {
    if (monic.low_ != 0 || !monic.lead().is_one()) throw std::invalid_argument("divisor must be monic");
    if (is_zero()) {
        quotient = Laurent();
        return true;
    }
    const std::size_t m = monic.coeffs_.size() - 1;
    if (coeffs_.size() <= m) return false;
    std::vector<Integer> rem = coeffs_;
    std::vector<Integer> q(rem.size() - m);
    for (std::size_t k = rem.size(); k-- > m;) {
        const Integer lead = rem[k];
        q[k - m] = lead;
        if (lead.is_zero()) continue;
        for (std::size_t j = 0; j < m; ++j) {
            const Integer& d = monic.coeffs_[j];
            if (!d.is_zero()) rem[k - m + j].addmul(-lead, d);
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!rem[j].is_zero()) return false;
    }
    quotient = Laurent(low_, std::move(q));
    return true;
}

mpq_class Laurent::evaluate(const mpq_class& u) const {
    if (is_zero()) return 0;
    // Horner from the top, then scale by u^low.
    mpq_class acc = 0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * u + mpq_class(coeffs_[k].to_mpz());
    if (low_ != 0) {
        mpq_class p = 1;
        const mpq_class base = low_ > 0 ? u : mpq_class(1) / u;
        for (int i = 0; i < std::abs(low_); ++i) p *= base;
        acc *= p;
    }
    return acc;
}

std::string Laurent::str() const {
    if (is_zero()) return "0";
    std::string out;
    for (int e = high(); e >= low_; --e) {
        const Integer& c = coeffs_[static_cast<std::size_t>(e - low_)];
        if (c.is_zero()) continue;
        const bool neg = c.sign() < 0;
        const Integer mag = abs(c);
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (e == 0) {
            out += mag.str();
            continue;
        }
        if (!mag.is_one()) out += mag.str() + "*";
        out += "u";
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

std::size_t Laurent::hash() const {
    std::size_t h = std::hash<int>{}(low_);
    for (const auto& c : coeffs_) h ^= c.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

namespace {

// a mod b with pseudo-division: lc(b)^k a = q b + r.
Laurent pseudo_remainder(const Laurent& a, const Laurent& b) {
    std::vector<Integer> r = a.coeffs();
    const std::vector<Integer>& d = b.coeffs();
    const std::size_t m = d.size() - 1;
    const Integer& lb = d.back();
    while (r.size() > m) {
        const Integer lead = r.back();
        if (lead.is_zero()) {
            r.pop_back();
            continue;
        }
        const std::size_t shift = r.size() - 1 - m;
        for (auto& x : r) x *= lb;
        for (std::size_t j = 0; j <= m; ++j) r[shift + j] -= lead * d[j];
        r.pop_back();
    }
    return Laurent(0, std::move(r));
}

Laurent primitive_part(const Laurent& p) {
    Laurent r = p;
    Integer c = r.content();
    if (r.lead().sign() < 0) c = -c;
    r.divexact(c);
    return r;
}

}  // namespace

Laurent poly_gcd(const Laurent& a, const Laurent& b) {
    if (a.is_zero() || b.is_zero()) throw std::invalid_argument("poly_gcd of zero");
    if (a.low() != 0 || b.low() != 0) throw std::invalid_argument("poly_gcd expects polynomials with nonzero constant term");
    Laurent x = primitive_part(a.shifted(-a.low()));
    Laurent y = primitive_part(b.shifted(-b.low()));
    if (x.high() < y.high()) std::swap(x, y);
    while (!y.is_zero() && y.high() > 0) {
        Laurent r = pseudo_remainder(x, y);
        x = std::move(y);
        // Neither input is divisible by u, so powers of u can be dropped.
        y = r.is_zero() ? r : primitive_part(r.shifted(-r.low()));
    }
    if (y.is_zero()) return x;
    return Laurent(1);  // nonzero constant remainder: coprime
}

Laurent poly_divexact(const Laurent& a, const Laurent& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.is_zero()) return {};
    std::vector<Integer> r = a.coeffs();
    const std::vector<Integer>& d = b.coeffs();
    const std::size_t m = d.size() - 1;
    if (r.size() <= m) throw std::domain_error("inexact polynomial division");
    std::vector<Integer> q(r.size() - m);
    for (std::size_t k = r.size(); k-- > m;) {
        if (r[k].is_zero()) continue;
        Integer qq;
        Integer rem;
        divmod(r[k], d.back(), qq, rem);
        if (!rem.is_zero()) throw std::domain_error("inexact polynomial division");
        q[k - m] = qq;
        for (std::size_t j = 0; j <= m; ++j) r[k - m + j] -= qq * d[j];
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (!r[j].is_zero()) throw std::domain_error("inexact polynomial division");
    }
    return Laurent(a.low() - b.low(), std::move(q));
}

int totient(int n) {
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

const Laurent& cyclotomic(int n) {
    if (n < 1) throw std::invalid_argument("cyclotomic index must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<Laurent>> cache;
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(n); it != cache.end()) return *it->second;
    }
    // u^n - 1 divided by every Phi_d with d | n, d < n.
    Laurent p = Laurent::binomial(Integer(1), n, Integer(-1), 0);
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        Laurent q;
        if (!p.divides_by_monic(cyclotomic(d), q)) throw std::logic_error("cyclotomic construction failed");
        p = std::move(q);
    }
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.emplace(n, std::make_unique<Laurent>(std::move(p)));
    return *it->second;
}

}  // namespace qfree
