#pragma once

#include <set>
#include <string>
#include <vector>

#include "qfree/currents.hpp"
#include "qfree/fock.hpp"
#include "qfree/qseries.hpp"
#include "qfree/repcheck.hpp"
#include "qfree/report.hpp"

namespace qfree {

enum class VertexType { I, II };

/// A q-vertex operator V(lambda) -> V(mu) (x) V_z (type I) or V_z (x) V(mu) (type II).
struct VertexPair {
    VertexType type = VertexType::I;
    int lambda = 1;
    int mu = 2;

    /// "I" or "II" together with "1->2", "2->1", "3->4", "4->3".
    static VertexPair parse(const std::string& type, const std::string& pair);
    [[nodiscard]] std::string str() const;
    [[nodiscard]] std::string type_str() const { return type == VertexType::I ? "I" : "II"; }
    [[nodiscard]] Json to_json() const;
    friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

/// The eight operators: four pairs, both types.
const std::vector<VertexPair>& all_vertex_pairs();

/// The normalization constant r as a current monomial (scalar times a power of z).
CurrentExpr vertex_constant(const VertexPair& p);

/// Component +1 or -1 that is written directly as a normal-ordered product.
inline int direct_component(VertexType t) { return t == VertexType::I ? -1 : 1; }

/// Deliberate corruptions of the direct component, for mutation tests.
/// `scale` multiplies the b-current argument scale by q^(-1/2); `ghost` replaces the
/// b-current factor by a bare Yb+ field (type I loses the q-difference, type II swaps Yb- for Yb+).
enum class VertexMutation { none, scale, ghost };

std::string mutation_str(VertexMutation m);

/// Both components of one vertex operator, mode by mode. The direct component is
/// a compiled current; the other is the q-commutator with f1 (type I) or e1 (type II).
class VertexOperator {
public:
    explicit VertexOperator(VertexPair pair, VertexMutation mutation = VertexMutation::none);

    [[nodiscard]] const VertexPair& pair() const { return pair_; }
    [[nodiscard]] const CurrentExpr& direct_expr() const { return expr_; }

    /// Coefficient of z^(n4/4) in the component applied to v.
    [[nodiscard]] FockVector apply(int component, int n4, const FockVector& v) const;
    /// Exponents (times 4) at which the component can be nonzero on v with output degree <= trunc.
    [[nodiscard]] std::set<int> support(int component, const FockVector& v, int trunc) const;

private:
    VertexPair pair_;
    CurrentExpr expr_;
    CompiledExpr direct_;
};

/// The sector of the target family reached from source sector s by a component.
Sector vertex_target(const VertexPair& p, int component, Sector s);

/// Condition ids: "V1".."V10", "A", "B".
const std::vector<std::string>& intertwining_conditions();

/// Evaluates one intertwining condition on the hw vector and the degree <= `degree` basis
/// of its sector, for vertex modes |n| <= window and current modes |k| <= window.
VerificationReport check_intertwining(const VertexPair& p, const std::string& which, int degree, int window,
                                      VertexMutation mutation = VertexMutation::none);

/// {Phi_c(z), Q-} = 0 for both components on the source family sectors up to `degree`.
/// The b-current enters only through q-differences of Yb+ or through Yb-, both of which
/// anticommute with Q- at any argument scale, so a `scale` mutation is invisible here.
VerificationReport check_screening_anticommute(const VertexPair& p, int degree,
                                               VertexMutation mutation = VertexMutation::none);

/// Lowest z-mode of the operator on |lambda> is |mu> in the normalized component; the other
/// component at that mode is a multiple of f1|mu>.
VerificationReport normalization_check(const VertexPair& p);

struct TwoPoint {
    /// Coefficient series in z = z1/z2 of <lambda1| Phi_e2(z2) Phi_e1(z1) |lambda1>, indexed [e2][e1]
    /// with 0 for + and 1 for -, after dividing by the overall power of z2.
    std::vector<std::vector<UScalarSeries>> components;
    VerificationReport report;
};

/// Two-point function of the type I operators lambda1 -> lambda2 -> lambda1 through z-order `order`.
/// Type II is computed without a reference formula when `type` is II.
TwoPoint two_point(int order, VertexType type = VertexType::I);

/// (q^3 z;q^4)(q^6 z;q^4) / ((q z;q^4)(q^4 z;q^4)) expanded to z-order `order`.
UScalarSeries two_point_product(int order);

}  // namespace qfree
