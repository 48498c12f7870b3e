#pragma once

#include <climits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qfree/fock.hpp"
#include "qfree/qseries.hpp"
#include "qfree/report.hpp"
#include "qfree/uscalar.hpp"

namespace qfree {

enum class Gen { YaPlus, YaMinus, YbPlus, YbMinus, JPlus, JMinus, Psi, Phi };

std::string gen_name(Gen g);
Gen parse_gen(const std::string& name);

/// sign * u^exponent, the factor multiplying a current's argument.
struct Scale {
    int sign = 1;
    int uexp = 0;

    static Scale parse(const std::string& text);
    [[nodiscard]] UScalar value() const;
    /// c^e for integer e.
    [[nodiscard]] UScalar pow(int e) const;
    [[nodiscard]] std::string str() const;
    friend Scale operator*(Scale x, Scale y) { return Scale{x.sign * y.sign, x.uexp + y.uexp}; }
    friend auto operator<=>(const Scale&, const Scale&) = default;
};

struct GeneratorFactor {
    Gen name;
    Scale scale;
    friend auto operator<=>(const GeneratorFactor&, const GeneratorFactor&) = default;
};

/// Static data of one exponential current. The argument convention is
/// exp(sum C_k x_-k z^(sigma k)) exp(sum A_k x_k z^-k) e^(shift) z^(gamma a0 + delta b0) q^(kappa a0).
struct GeneratorInfo {
    Family family;
    int sigma;        // +1, or -1 for the creation part of Phi
    int dl1x2;        // a-shift, doubled
    int dl2;          // b-shift
    int gamma;        // z-power per unit of a0
    int delta;        // z-power per unit of b0
    int kappa;        // q-power per unit of a0
    bool creation;
    bool annihilation;
};

const GeneratorInfo& generator_info(Gen g);
/// Creation and annihilation coefficients at index k >= 1 for unit scale.
const UScalar& creation_coeff(Gen g, int k);
const UScalar& annihilation_coeff(Gen g, int k);

/// scalar * z^(zpow4/4) * :product of factors:
struct CurrentTerm {
    UScalar scalar{1};
    int zpow4 = 0;
    std::vector<GeneratorFactor> factors;
};

class CurrentExpr {
public:
    CurrentExpr() = default;
    explicit CurrentExpr(std::vector<CurrentTerm> terms) : terms_(std::move(terms)) {}

    /// The identity term 1 (empty normal-ordered product).
    static CurrentExpr one();
    /// c * z^(zpow4/4) with no current factors.
    static CurrentExpr monomial(const UScalar& c, int zpow4);

    [[nodiscard]] const std::vector<CurrentTerm>& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }

    CurrentExpr& operator+=(const CurrentExpr& o);
    CurrentExpr& operator-=(const CurrentExpr& o);
    CurrentExpr& operator*=(const UScalar& c);
    friend CurrentExpr operator+(CurrentExpr a, const CurrentExpr& b) { return a += b; }
    friend CurrentExpr operator-(CurrentExpr a, const CurrentExpr& b) { return a -= b; }
    friend CurrentExpr operator*(const UScalar& c, CurrentExpr e) { return e *= c; }

    /// Multiply by z^(k/4).
    [[nodiscard]] CurrentExpr times_z(int zpow4) const;
    /// e(lambda z) for lambda = sign * u^m.
    [[nodiscard]] CurrentExpr rescaled(Scale lambda) const;
    /// Sort factors inside each term and merge terms with equal structure.
    [[nodiscard]] CurrentExpr simplified() const;

    /// "nprod(Ya+@1, Yb+@u^4, Yb+@1)"; terms joined by " + ".
    [[nodiscard]] std::string str() const;
    static CurrentExpr parse(const std::string& text);

private:
    std::vector<CurrentTerm> terms_;
};

CurrentExpr generator(Gen g, Scale scale = Scale{});
CurrentExpr nproduct(const std::vector<CurrentExpr>& parts);
/// (f(q^(1/2) z) - f(q^(-1/2) z)) / ((q^(1/2) - q^(-1/2)) z).
CurrentExpr qdifference(const CurrentExpr& e);

/// Precompiled form of an expression for mode application. Coefficient tables
/// and creation expansions are built lazily and shared by all modes.
class CompiledExpr {
public:
    static constexpr int kNoTruncation = INT_MAX;

    explicit CompiledExpr(const CurrentExpr& e);

    /// Coefficient of z^(n4/4) in e(z) applied to m, output degree <= trunc.
    [[nodiscard]] FockVector apply(int n4, const BasisMonomial& m, int trunc = kNoTruncation) const;
    [[nodiscard]] FockVector apply(int n4, const FockVector& v, int trunc = kNoTruncation) const;
    /// Cached operator for one mode.
    [[nodiscard]] LinearOperator mode(int n4, int trunc = kNoTruncation) const;
    /// Exponents (times 4) at which apply can be nonzero for this vector.
    [[nodiscard]] std::set<int> support(const FockVector& v, int trunc) const;

    struct Term;
    struct State;

private:
    std::shared_ptr<State> state_;
};

FockVector apply_mode(const CurrentExpr& e, int n4, const FockVector& v, int trunc = CompiledExpr::kNoTruncation);
std::set<int> mode_support(const CurrentExpr& e, const FockVector& v, int trunc);

/// left(z) right(w) = z^(zexp4/4) * series(w/z) * :left(z) right(w):
struct Contraction {
    UScalarSeries series;
    int zexp4;
};

Contraction contraction_series(const CurrentTerm& left, const CurrentTerm& right, int order, bool mutate_bracket = false);

/// Formulas (1)-(8) of the operator product list, both sign choices.
VerificationReport check_ope_formula(int id, int order, bool mutate_bracket = false);

/// The Drinfeld currents of the realization.
CurrentExpr x_plus_mform();
CurrentExpr x_plus_dform();
CurrentExpr x_minus();
/// The three normal-ordered pieces M1, M2, M3 of X+ and M- of X-.
CurrentExpr m_plus(int which);
CurrentExpr m_minus();
CurrentExpr psi_current();
CurrentExpr phi_current();

/// Mode exponent (times 4) of x_k in X(z) = sum x_k z^(-k-1).
inline int drinfeld_mode(int k) { return -4 * (k + 1); }

}  // namespace qfree
