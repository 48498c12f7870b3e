#pragma once

#include <algorithm>
#include <array>
#include <climits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qfree/report.hpp"
#include "qfree/uscalar.hpp"

namespace qfree {

inline bool coeff_is_zero(const Rational& c) { return sgn(c) == 0; }
inline bool coeff_is_zero(const UScalar& c) { return c.is_zero(); }
inline std::string coeff_str(const Rational& c) { return c.get_str(); }
inline std::string coeff_str(const UScalar& c) { return c.str(); }

/// Exponent window on the second variable, inclusive.
struct Window {
    int lo;
    int hi;
    friend bool operator==(const Window&, const Window&) = default;
};

/// Sparse truncated Laurent series in one or two variables.
///
/// Terms with first exponent above `order` are dropped; when a window is set,
/// terms whose second exponent leaves it are dropped as well. Negative first
/// exponents are kept.
template <class C>
class TruncatedSeries {
public:
    using Exponent = std::array<int, 2>;
    using Terms = std::map<Exponent, C>;

    TruncatedSeries(std::vector<std::string> vars, int order, std::optional<Window> window = std::nullopt)
        : vars_(std::move(vars)), order_(order), window_(window) {
        if (vars_.empty() || vars_.size() > 2) throw std::invalid_argument("series need one or two variables");
        if (window_ && vars_.size() != 2) throw std::invalid_argument("a window needs a second variable");
    }

    static TruncatedSeries constant(const TruncatedSeries& like, C c) {
        TruncatedSeries s = like.empty_like();
        s.add_term({0, 0}, std::move(c));
        return s;
    }
    static TruncatedSeries monomial(const TruncatedSeries& like, C c, int i, int j = 0) {
        TruncatedSeries s = like.empty_like();
        s.add_term({i, j}, std::move(c));
        return s;
    }

    [[nodiscard]] TruncatedSeries empty_like() const { return TruncatedSeries(vars_, order_, window_); }

    [[nodiscard]] const std::vector<std::string>& vars() const { return vars_; }
    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] const std::optional<Window>& window() const { return window_; }
    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }

    [[nodiscard]] bool keeps(int i, int j) const {
        if (i > order_) return false;
        if (vars_.size() == 1 && j != 0) return false;
        return !window_ || (j >= window_->lo && j <= window_->hi);
    }

    [[nodiscard]] C coeff(int i, int j = 0) const {
        auto it = terms_.find({i, j});
        return it == terms_.end() ? C(0) : it->second;
    }

    void add_term(Exponent e, const C& c) {
        if (coeff_is_zero(c) || !keeps(e[0], e[1])) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (coeff_is_zero(it->second)) terms_.erase(it);
        }
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        check_compatible(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        check_compatible(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    TruncatedSeries& operator*=(const C& c) {
        if (coeff_is_zero(c)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, x] : terms_) x *= c;
        return *this;
    }
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    TruncatedSeries operator-() const {
        TruncatedSeries r = *this;
        for (auto& [e, x] : r.terms_) x = -x;
        return r;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_compatible(b);
        TruncatedSeries r = a.empty_like();
        if (a.terms_.empty() || b.terms_.empty()) return r;
        const int bmin = b.terms_.begin()->first[0];
        for (const auto& [ea, ca] : a.terms_) {
            if (ea[0] + bmin > a.order_) break;
            for (const auto& [eb, cb] : b.terms_) {
                const int i = ea[0] + eb[0];
                if (i > a.order_) break;
                r.add_term({i, ea[1] + eb[1]}, ca * cb);
            }
        }
        return r;
    }
    TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

    /// Multiplicative inverse. The constant term must be nonzero and every
    /// other term must either carry a positive first exponent, or a second
    /// exponent of one fixed sign (which then requires a window).
    [[nodiscard]] TruncatedSeries inv() const {
        const C c0 = coeff(0, 0);
        if (coeff_is_zero(c0)) throw std::domain_error("series inverse: constant term is zero");
        int t_sign = 0;
        for (const auto& [e, c] : terms_) {
            if (e[0] < 0) throw std::domain_error("series inverse: term of negative order");
            if (e[0] == 0 && e[1] != 0) {
                const int s = e[1] > 0 ? 1 : -1;
                if (t_sign != 0 && s != t_sign) throw std::domain_error("series inverse: leading part not invertible");
                t_sign = s;
            }
        }
        if (t_sign != 0 && !window_) throw std::domain_error("series inverse: infinite expansion needs a window");
        // Support of the inverse at each first exponent.
        std::vector<int> jlo(static_cast<std::size_t>(std::max(order_, 0) + 1));
        std::vector<int> jhi(jlo.size());
        for (int i = 0; i <= order_; ++i) {
            if (window_) {
                jlo[i] = window_->lo;
                jhi[i] = window_->hi;
                continue;
            }
            int lo = i == 0 ? 0 : INT_MAX;
            int hi = i == 0 ? 0 : INT_MIN;
            for (const auto& [e, c] : terms_) {
                if (e[0] < 1 || e[0] > i) continue;
                if (jlo[i - e[0]] > jhi[i - e[0]]) continue;
                lo = std::min(lo, e[1] + jlo[i - e[0]]);
                hi = std::max(hi, e[1] + jhi[i - e[0]]);
            }
            jlo[i] = lo;
            jhi[i] = hi;
        }
        TruncatedSeries r = empty_like();
        std::map<Exponent, C>& out = r.terms_;
        for (int i = 0; i <= order_; ++i) {
            if (jlo[i] > jhi[i]) continue;
            std::vector<int> js;
            for (int j = jlo[i]; j <= jhi[i]; ++j) js.push_back(j);
            if (t_sign < 0) std::reverse(js.begin(), js.end());
            for (int j : js) {
                C acc = (i == 0 && j == 0) ? C(1) : C(0);
                for (const auto& [e, c] : terms_) {
                    if (e[0] == 0 && e[1] == 0) continue;
                    if (e[0] > i) break;
                    auto it = out.find({i - e[0], j - e[1]});
                    if (it != out.end()) acc -= c * it->second;
                }
                if (!coeff_is_zero(acc)) out.emplace(Exponent{i, j}, acc / c0);
            }
        }
        return r;
    }

    /// Keep only terms inside a smaller window / lower order.
    [[nodiscard]] TruncatedSeries restricted(int order, std::optional<Window> window) const {
        TruncatedSeries r(vars_, order, window);
        for (const auto& [e, c] : terms_) r.add_term(e, c);
        return r;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a.vars_ == b.vars_ && a.order_ == b.order_ && a.window_ == b.window_ && a.terms_ == b.terms_;
    }

    [[nodiscard]] Json to_json() const {
        Json j;
        j["vars"] = vars_;
        j["order"] = order_;
        if (window_) j["window"] = {window_->lo, window_->hi};
        Json ts = Json::array();
        for (const auto& [e, c] : terms_) {
            Json ex = vars_.size() == 1 ? Json::array({e[0]}) : Json::array({e[0], e[1]});
            ts.push_back(Json{{"e", ex}, {"c", coeff_str(c)}});
        }
        j["terms"] = ts;
        return j;
    }

    void check_compatible(const TruncatedSeries& o) const {
        if (vars_ != o.vars_) throw std::invalid_argument("series variables differ");
        if (order_ != o.order_ || !(window_ == o.window_)) throw std::invalid_argument("series truncations differ");
    }

private:
    std::vector<std::string> vars_;
    int order_;
    std::optional<Window> window_;
    Terms terms_;
};

using RationalSeries = TruncatedSeries<Rational>;
using UScalarSeries = TruncatedSeries<UScalar>;

/// prod_{n>=0} (1 - c * v0^(i + step*n) * v1^j), truncated like `like`.
/// Returns zero if a factor is identically zero; throws when infinitely many
/// factors would contribute below the order.
template <class C>
TruncatedSeries<C> pochhammer_expand(const TruncatedSeries<C>& like, const C& c, int i, int j, int step) {
    TruncatedSeries<C> one = TruncatedSeries<C>::constant(like, C(1));
    if (coeff_is_zero(c)) return one;
    if (step <= 0) throw std::domain_error("pochhammer product does not stabilize: base exponent must be positive");
    if (j == 0 && i <= 0 && (-i) % step == 0 && c == C(1)) return like.empty_like();
    TruncatedSeries<C> acc = one;
    for (int e = i; e <= like.order(); e += step) {
        if (e < 0) {
            // A factor of negative order would pull truncated terms back below the order.
            throw std::domain_error("pochhammer product does not stabilize: negative prefactor exponent");
        }
        TruncatedSeries<C> f = one;
        f.add_term({e, j}, -c);
        acc *= f;
    }
    return acc;
}

/// Expansion of (a x; Q)_inf / (b x; Q)_inf in x to the given order, by the
/// q-binomial theorem: sum_n (a/b; Q)_n / (Q; Q)_n (b x)^n.
UScalarSeries q_binomial_ratio(const UScalar& a, const UScalar& b, const UScalar& base, int order,
                               const std::string& var = "z");

/// Series identity checks. Orders are in powers of p; internally s = p^(1/2).
VerificationReport check_star_identity(int order, bool mutate_sign = false);
VerificationReport check_S(int l, int order);
VerificationReport check_jacobi_triple(int l, int order);

/// Left and right side of the reduced star identity, in (s, t) = (p^(1/2), z^(1/2)).
RationalSeries star_lhs(int order, bool mutate_sign = false);
/// (p;p)^3 in s.
RationalSeries euler_cubed(int order);

/// Character of F1 + F2 from the product form, and of F3 + F4 (prefactor
/// p^(-1/8) z^(1/4) stripped), in (s, t) with the given t-window.
RationalSeries product_character_12(int order, Window window);
RationalSeries product_character_34(int order, Window window);

}  // namespace qfree
