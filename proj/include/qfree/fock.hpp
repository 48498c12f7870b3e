#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "qfree/uscalar.hpp"

namespace qfree {

/// Oscillator indices of one family, stored in descending order.
using Parts = boost::container::small_vector<std::uint8_t, 10>;

enum class Family { a, b };

/// Half-integer l1 is stored doubled; everything else is plain.
struct BasisMonomial {
    int l1x2 = 0;
    int l2 = 0;
    Parts a;
    Parts b;

    BasisMonomial() = default;
    BasisMonomial(int l1_twice, int l2_value) : l1x2(l1_twice), l2(l2_value) {}

    [[nodiscard]] int degree() const;
    [[nodiscard]] Rational l1() const {
        Rational r(l1x2, 2);
        r.canonicalize();
        return r;
    }

    /// "a[-2]a[-1]b[-3]|1/2,-1>".
    [[nodiscard]] std::string str() const;
    static BasisMonomial parse(const std::string& text);

    friend bool operator==(const BasisMonomial&, const BasisMonomial&) = default;
    friend std::strong_ordering operator<=>(const BasisMonomial& x, const BasisMonomial& y);
    [[nodiscard]] std::size_t hash() const;
};

struct BasisMonomialHash {
    std::size_t operator()(const BasisMonomial& m) const { return m.hash(); }
};

/// Insert index k into a descending parts list.
void insert_part(Parts& parts, int k);
/// Render a half-integer given twice its value: 1 -> "1/2", -4 -> "-2".
std::string half_str(int twice);

/// Finite linear combination of basis monomials.
class FockVector {
public:
    using Map = std::unordered_map<BasisMonomial, UScalar, BasisMonomialHash>;

    FockVector() = default;
    explicit FockVector(const BasisMonomial& m, UScalar c = UScalar(1));

    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] const Map& terms() const { return terms_; }
    [[nodiscard]] UScalar coeff(const BasisMonomial& m) const;
    /// Terms sorted by monomial, for deterministic output.
    [[nodiscard]] std::vector<std::pair<BasisMonomial, UScalar>> sorted() const;
    /// True when all terms share one (l1, l2) sector.
    [[nodiscard]] bool single_sector() const;
    /// Highest oscillator degree present; -1 for the zero vector.
    [[nodiscard]] int max_degree() const;

    void add(const BasisMonomial& m, const UScalar& c);
    /// this += c * v.
    void add_scaled(const FockVector& v, const UScalar& c);

    FockVector& operator+=(const FockVector& o);
    FockVector& operator-=(const FockVector& o);
    FockVector& operator*=(const UScalar& c);
    friend FockVector operator+(FockVector x, const FockVector& y) { return x += y; }
    friend FockVector operator-(FockVector x, const FockVector& y) { return x -= y; }
    friend FockVector operator*(const UScalar& c, FockVector v) { return v *= c; }

    friend bool operator==(const FockVector& x, const FockVector& y) { return x.terms_ == y.terms_; }

    /// "3*a[-1]|0,0> + (u^2 - 1)*|0,1>"; "0" when empty.
    [[nodiscard]] std::string str() const;

private:
    Map terms_;
};

/// Coefficients of Lambda_0, Lambda_1 and delta.
struct Weight {
    Rational lambda0;
    Rational lambda1;
    Rational delta;

    [[nodiscard]] Rational level() const { return lambda0 + lambda1; }
    [[nodiscard]] std::string str() const;
    friend bool operator==(const Weight&, const Weight&) = default;
};

/// All monomials of exact oscillator degree in sector (l1, l2).
/// Ordered by a-degree descending, then partitions in reverse lexicographic order.
const std::vector<BasisMonomial>& enumerate_basis(int l1x2, int l2, int degree);

/// Number of two-colored partitions of n.
std::size_t two_colored_partitions(int n);

/// [a_n, a_-n] for the a-family, n for the b-family (n > 0).
const UScalar& oscillator_bracket(Family f, int n);

FockVector apply_oscillator(Family f, int n, const FockVector& v);
FockVector apply_shift(Family f, int direction, const FockVector& v);

/// Grading eigenvalue scaled by 8.
int dbar8_of(const BasisMonomial& m);
inline Rational dbar_of(const BasisMonomial& m) {
    Rational r(dbar8_of(m), 8);
    r.canonicalize();
    return r;
}
Weight weight_of(const BasisMonomial& m);

UScalar extract_vacuum(const FockVector& v, int l1x2, int l2);

/// Linear operator given by its action on basis monomials. Columns are cached;
/// the cache is guarded so one operator can be shared between threads.
class LinearOperator {
public:
    using Column = std::function<FockVector(const BasisMonomial&)>;

    LinearOperator() = default;
    explicit LinearOperator(Column column);

    [[nodiscard]] const FockVector& column(const BasisMonomial& m) const;
    [[nodiscard]] FockVector apply(const FockVector& v) const;
    [[nodiscard]] FockVector operator()(const FockVector& v) const { return apply(v); }

private:
    struct State {
        Column column;
        std::mutex mutex;
        std::unordered_map<BasisMonomial, std::unique_ptr<FockVector>, BasisMonomialHash> cache;
    };
    std::shared_ptr<State> state_;
};

}  // namespace qfree
