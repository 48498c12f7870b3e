#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qfree/currents.hpp"
#include "qfree/fock.hpp"
#include "qfree/linalg.hpp"
#include "qfree/qseries.hpp"
#include "qfree/report.hpp"

namespace qfree {

/// Vacuum labels (l1, l2) with l1 stored doubled.
struct Sector {
    int l1x2 = 0;
    int l2 = 0;

    [[nodiscard]] std::string str() const;
    /// "0,0", "-1/2,0", "(1,1)".
    static Sector parse(const std::string& text);
    [[nodiscard]] Json to_json() const;
    friend auto operator<=>(const Sector&, const Sector&) = default;
};

/// The four sectors on which the relations are checked.
const std::vector<Sector>& standard_sectors();
/// Sector offsets (r_i, t_i) of the families F_1..F_4.
Sector family_offset(int i);

/// All basis monomials of the sector with degree <= max_degree.
std::vector<BasisMonomial> basis_up_to(Sector s, int max_degree);

/// The algebra acting on the Fock modules. Operators are built lazily and cached.
class AlgebraAction {
public:
    /// Shared instance; `dform` selects the difference-operator builder of X+.
    static const AlgebraAction& instance(bool dform = false);

    explicit AlgebraAction(bool dform);

    /// x+_k for sign > 0, x-_k otherwise.
    [[nodiscard]] LinearOperator x(int sign, int k) const;
    /// Coefficient of z^-m in psi(z) and of z^m in phi(z) (the latter nonzero for m <= 0).
    [[nodiscard]] LinearOperator psi(int m) const;
    [[nodiscard]] LinearOperator phi(int m) const;
    [[nodiscard]] LinearOperator h(int k) const;
    /// K^power acts by q^(power*l1).
    [[nodiscard]] LinearOperator K(int power) const;
    [[nodiscard]] LinearOperator eta0() const;
    [[nodiscard]] LinearOperator xi0() const;

    /// Chevalley generators, i in {0, 1}; t(i, -1) is the inverse.
    [[nodiscard]] LinearOperator e(int i) const;
    [[nodiscard]] LinearOperator f(int i) const;
    [[nodiscard]] LinearOperator t(int i, int power = 1) const;

    /// gamma = q^(-1/2).
    static UScalar gamma();

private:
    LinearOperator cached(const std::string& key, const std::function<LinearOperator()>& make) const;

    CompiledExpr x_plus_;
    CompiledExpr x_minus_;
    CompiledExpr psi_;
    CompiledExpr phi_;
    CompiledExpr eta_;
    CompiledExpr xi_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, LinearOperator> ops_;
};

/// a∘b with cached columns.
LinearOperator compose(const LinearOperator& a, const LinearOperator& b);

/// Relation ids "R1".."R7".
VerificationReport check_drinfeld(const std::string& id, Sector sector, int degree, int window,
                                  const AlgebraAction& action = AlgebraAction::instance());

/// [x+-_k, Q-] = [h_k, Q-] = [K, Q-] = 0 for |k| <= kmax on degree <= degree, and
/// Q- Q- = 0 on degree <= degree + 1. `mutate` replaces the screening integrand by Yb+.
VerificationReport check_screening(int kmax, int degree, bool mutate = false);

/// The two builders of X+ agree mode by mode: x+_k for |k| <= window on the
/// standard sectors up to `degree`.
VerificationReport check_xplus_builders(int degree, int window);

/// eta0^2 = 0 and xi0 eta0 + eta0 xi0 = 1.
VerificationReport clifford_check(int degree);

/// Matrix of Q- from the degree-d piece of a sector, columns indexed by the source basis.
ScalarMatrix screening_matrix(Sector s, int degree);
/// Degree of the image of a degree-d vector under Q-.
inline int screening_target_degree(Sector s, int degree) { return degree + s.l2 - 1; }
std::size_t kernel_dimension(Sector s, int degree);

struct KernelCharacter {
    RationalSeries series;  // in (s, t) = (p^(1/2), z^(1/2)), prefactor stripped for families 3, 4
    VerificationReport report;
};

/// Kernel dimensions over the sectors of family i with |l| <= mwindow, degrees <= maxdeg,
/// compared with the closed product form and with the exact-sequence alternating sum.
KernelCharacter kernel_character(int i, int maxdeg, int mwindow);

/// Highest weight vector |lambda'_i> and its stated weight.
BasisMonomial highest_weight_vector(int i);
Weight highest_weight(int i);
VerificationReport hw_verify(int i);

}  // namespace qfree
