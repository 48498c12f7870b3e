#include "qfree/vertexops.hpp"

#include <stdexcept>

#include "check_util.hpp"
#include "qfree/parallel.hpp"

namespace qfree {

namespace {

using detail::expect_zero;
using detail::per_vector;
using detail::residual_str;

constexpr int kPlus = 1;
constexpr int kMinus = -1;

bool admissible(int lambda, int mu) {
    return (lambda == 1 && mu == 2) || (lambda == 2 && mu == 1) || (lambda == 3 && mu == 4) ||
           (lambda == 4 && mu == 3);
}

std::string component_name(int c) { return c > 0 ? "+" : "-"; }

}  // namespace

// ---------------------------------------------------------------------------
// Pairs

VertexPair VertexPair::parse(const std::string& type, const std::string& pair) {
    VertexPair p;
    if (type == "I" || type == "1") {
        p.type = VertexType::I;
    } else if (type == "II" || type == "2") {
        p.type = VertexType::II;
    } else {
        throw std::invalid_argument("vertex operator type must be I or II, got '" + type + "'");
    }
    const auto arrow = pair.find("->");
    if (arrow == std::string::npos || arrow != 1 || pair.size() != 4) {
        throw std::invalid_argument("pair must look like '1->2', got '" + pair + "'");
    }
    p.lambda = pair[0] - '0';
    p.mu = pair[3] - '0';
    if (!admissible(p.lambda, p.mu)) throw std::invalid_argument("no vertex operator for pair '" + pair + "'");
    return p;
}

std::string VertexPair::str() const { return std::to_string(lambda) + "->" + std::to_string(mu); }

Json VertexPair::to_json() const { return Json{{"type", type_str()}, {"pair", str()}}; }

const std::vector<VertexPair>& all_vertex_pairs() {
    static const std::vector<VertexPair> pairs = [] {
        std::vector<VertexPair> out;
        for (VertexType t : {VertexType::I, VertexType::II}) {
            for (auto [l, m] : {std::pair{1, 2}, {2, 1}, {3, 4}, {4, 3}}) out.push_back(VertexPair{t, l, m});
        }
        return out;
    }();
    return pairs;
}

CurrentExpr vertex_constant(const VertexPair& p) {
    if (!admissible(p.lambda, p.mu)) throw std::invalid_argument("no vertex operator for pair " + p.str());
    // (sign, power of u, power of z times 4)
    struct Entry {
        int sign, uexp, zpow4;
    };
    static const Entry type1[] = {{1, 0, 0}, {-1, 6, 4}, {-1, 3, 2}, {-1, 3, 2}};
    static const Entry type2[] = {{-1, -4, 0}, {1, -2, 4}, {1, -1, 2}, {1, -5, 2}};
    const Entry& e = (p.type == VertexType::I ? type1 : type2)[p.lambda - 1];
    return CurrentExpr::monomial(UScalar(e.sign) * UScalar::u_pow(e.uexp), e.zpow4);
}

// ---------------------------------------------------------------------------
// Components

namespace {

CurrentExpr direct_component_expr(const VertexPair& p, VertexMutation m) {
    const int shift = m == VertexMutation::scale ? -2 : 0;
    const bool ghost = m == VertexMutation::ghost;
    if (p.type == VertexType::I) {
        const Scale s{1, 6};
        const CurrentExpr y = ghost ? generator(Gen::YbPlus) : qdifference(generator(Gen::YbPlus));
        return nproduct({generator(Gen::JPlus, s), y.rescaled(Scale{1, 6 + shift}), vertex_constant(p)}).simplified();
    }
    const Scale s{1, -2};
    const Gen y = ghost ? Gen::YbPlus : Gen::YbMinus;
    return nproduct({generator(Gen::JMinus, s), generator(y, Scale{1, -2 + shift}), vertex_constant(p)}).simplified();
}

// f1 for type I, e1 for type II.
LinearOperator dressing(VertexType t) {
    const AlgebraAction& A = AlgebraAction::instance();
    return t == VertexType::I ? A.f(1) : A.e(1);
}

}  // namespace

std::string mutation_str(VertexMutation m) {
    switch (m) {
        case VertexMutation::scale: return "b-current scale times q^(-1/2)";
        case VertexMutation::ghost: return "b-current factor replaced by bare Yb+";
        case VertexMutation::none: break;
    }
    return "none";
}

VertexOperator::VertexOperator(VertexPair pair, VertexMutation mutation)
    : pair_(pair), expr_(direct_component_expr(pair, mutation)), direct_(expr_) {}

FockVector VertexOperator::apply(int component, int n4, const FockVector& v) const {
    const LinearOperator d = direct_.mode(n4);
    if (component == direct_component(pair_.type)) return d.apply(v);
    const LinearOperator x = dressing(pair_.type);
    FockVector out = d.apply(x.apply(v));
    out.add_scaled(x.apply(d.apply(v)), -UScalar::u_pow(4));
    return out;
}

std::set<int> VertexOperator::support(int component, const FockVector& v, int trunc) const {
    std::set<int> out = direct_.support(v, trunc);
    if (component != direct_component(pair_.type)) {
        const auto more = direct_.support(dressing(pair_.type).apply(v), trunc);
        out.insert(more.begin(), more.end());
    }
    return out;
}

Sector vertex_target(const VertexPair& p, int component, Sector s) {
    int d = p.type == VertexType::I ? 1 : -1;
    if (component != direct_component(p.type)) d = -d;
    return Sector{s.l1x2 + 2 * d, s.l2 + d};
}

// ---------------------------------------------------------------------------
// Intertwining conditions

const std::vector<std::string>& intertwining_conditions() {
    static const std::vector<std::string> ids = {"V1", "V2", "V3", "V4", "V5", "V6",
                                                 "V7", "V8", "V9", "V10", "A", "B"};
    return ids;
}

namespace {

// Vertex modes n4 with |n| <= window on the lattice the operator actually uses on v.
std::vector<int> vertex_modes(const VertexOperator& op, const FockVector& v, int window) {
    const int trunc = std::max(v.max_degree(), 0) + 2 * window + 4;
    std::set<int> offsets;
    for (int c : {kPlus, kMinus}) {
        for (int n4 : op.support(c, v, trunc)) offsets.insert(((n4 % 4) + 4) % 4);
    }
    std::vector<int> out;
    for (int off : offsets) {
        for (int n4 = -4 * window; n4 <= 4 * window; ++n4) {
            if (((n4 % 4) + 4) % 4 == off) out.push_back(n4);
        }
    }
    return out;
}

struct ConditionContext {
    const VertexOperator& op;
    const AlgebraAction& A;
    bool type1;
};

FockVector comm(const LinearOperator& y, const std::function<FockVector(const FockVector&)>& phi,
                const FockVector& v, const UScalar& q) {
    FockVector out = phi(y.apply(v));
    out.add_scaled(y.apply(phi(v)), -q);
    return out;
}

void check_condition(VerificationReport& r, const ConditionContext& ctx, const std::string& which,
                     const BasisMonomial& m, int window) {
    const FockVector v(m);
    const VertexOperator& op = ctx.op;
    const AlgebraAction& A = ctx.A;
    const UScalar q = UScalar::u_pow(4);
    const UScalar qi = UScalar::u_pow(-4);
    const UScalar one(1);
    auto P = [&](int c, int n4) { return [&op, c, n4](const FockVector& w) { return op.apply(c, n4, w); }; };

    for (int n4 : vertex_modes(op, v, window)) {
        const std::vector<std::pair<std::string, int>> tag = {{"n4", n4}};
        if (which == "V1" || which == "V2") {
            const int i = which == "V1" ? 1 : 0;
            for (int c : {kPlus, kMinus}) {
                // t1 Phi_c t1^-1 = q^(-c) Phi_c, t0 Phi_c t0^-1 = q^c Phi_c
                const int e = i == 1 ? -c : c;
                FockVector res = A.t(i, 1).apply(op.apply(c, n4, A.t(i, -1).apply(v)));
                res.add_scaled(op.apply(c, n4, v), -UScalar::u_pow(4 * e));
                expect_zero(r, res, m, {{"n4", n4}, {"component", c}});
            }
            continue;
        }
        FockVector res;
        if (ctx.type1) {
            if (which == "V3") {
                res = comm(A.e(0), P(kPlus, n4), v, one);
            } else if (which == "V4") {
                res = comm(A.e(0), P(kMinus, n4), v, one) - A.t(0).apply(op.apply(kPlus, n4 - 4, v));
            } else if (which == "V5") {
                res = comm(A.e(1), P(kPlus, n4), v, one) - A.t(1).apply(op.apply(kMinus, n4, v));
            } else if (which == "V6") {
                res = comm(A.e(1), P(kMinus, n4), v, one);
            } else if (which == "V7") {
                res = comm(A.f(0), P(kPlus, n4), v, q) - op.apply(kMinus, n4 + 4, v);
            } else if (which == "V8") {
                res = comm(A.f(0), P(kMinus, n4), v, qi);
            } else if (which == "V9") {
                res = comm(A.f(1), P(kMinus, n4), v, q) - op.apply(kPlus, n4, v);
            } else if (which == "V10") {
                res = comm(A.f(1), P(kPlus, n4), v, qi);
            }
        } else {
            if (which == "V3") {
                res = comm(A.e(0), P(kPlus, n4), v, qi);
            } else if (which == "V4") {
                res = comm(A.e(0), P(kMinus, n4), v, q) - op.apply(kPlus, n4 - 4, v);
            } else if (which == "V5") {
                res = comm(A.e(1), P(kPlus, n4), v, q) - op.apply(kMinus, n4, v);
            } else if (which == "V6") {
                res = comm(A.e(1), P(kMinus, n4), v, qi);
            } else if (which == "V7") {
                res = comm(A.f(0), P(kPlus, n4), v, one) - A.t(0, -1).apply(op.apply(kMinus, n4 + 4, v));
            } else if (which == "V8") {
                res = comm(A.f(0), P(kMinus, n4), v, one);
            } else if (which == "V9") {
                res = comm(A.f(1), P(kMinus, n4), v, one) - A.t(1, -1).apply(op.apply(kPlus, n4, v));
            } else if (which == "V10") {
                res = comm(A.f(1), P(kPlus, n4), v, one);
            }
        }
        if (which == "A" || which == "B") {
            // The direct component against X-+ (A) and X+- (B) currents.
            const int c = direct_component(op.pair().type);
            const int xa = ctx.type1 ? 1 : -1;
            for (int k = -window; k <= window; ++k) {
                const std::vector<std::pair<std::string, int>> km = {{"n4", n4}, {"k", k}};
                if (which == "A") {
                    expect_zero(r, comm(A.x(xa, k), P(c, n4), v, one), m, km);
                } else {
                    // [Phi(z), X(w)]_a = [Phi(z), X(w)]_b * w / (q^(1/2) z), a = q^-c, b = q^c
                    const UScalar a = c < 0 ? q : qi;
                    const UScalar b = c < 0 ? qi : q;
                    FockVector rb = comm(A.x(-xa, k), P(c, n4), v, a);
                    rb.add_scaled(comm(A.x(-xa, k + 1), P(c, n4 + 4), v, b), -UScalar::u_pow(-2));
                    expect_zero(r, rb, m, km);
                }
            }
            continue;
        }
        expect_zero(r, res, m, tag);
    }
}

std::vector<BasisMonomial> source_basis(const VertexPair& p, int degree) {
    const BasisMonomial hw = highest_weight_vector(p.lambda);
    std::vector<BasisMonomial> basis = basis_up_to(Sector{hw.l1x2, hw.l2}, degree);
    if (std::find(basis.begin(), basis.end(), hw) == basis.end()) basis.insert(basis.begin(), hw);
    return basis;
}

}  // namespace

VerificationReport check_intertwining(const VertexPair& p, const std::string& which, int degree, int window,
                                      VertexMutation mutation) {
    const auto& ids = intertwining_conditions();
    if (std::find(ids.begin(), ids.end(), which) == ids.end()) {
        throw std::invalid_argument("unknown intertwining condition '" + which + "'");
    }
    if (window < 1) throw std::invalid_argument("mode window must be at least 1");
    const VertexOperator op(p, mutation);
    const ConditionContext ctx{op, AlgebraAction::instance(), p.type == VertexType::I};
    VerificationReport body = per_vector(which, source_basis(p, degree), [&](VerificationReport& r, const BasisMonomial& m) {
        check_condition(r, ctx, which, m, window);
    });
    VerificationReport out(which);
    out.params()["type"] = p.type_str();
    out.params()["pair"] = p.str();
    out.params()["degree"] = degree;
    out.params()["window"] = window;
    if (mutation != VertexMutation::none) out.params()["mutation"] = mutation_str(mutation);
    out.merge(body);
    return out;
}

VerificationReport check_screening_anticommute(const VertexPair& p, int degree, VertexMutation mutation) {
    constexpr int kWindow = 2;
    const VertexOperator op(p, mutation);
    const LinearOperator q = AlgebraAction::instance().eta0();
    const Sector off = family_offset(p.lambda);
    std::vector<BasisMonomial> basis;
    for (int l : {-2, 0, 2}) {
        auto b = basis_up_to(Sector{off.l1x2 + 2 * l, off.l2 + l}, degree);
        basis.insert(basis.end(), b.begin(), b.end());
    }
    VerificationReport body = per_vector("anticommute", basis, [&](VerificationReport& r, const BasisMonomial& m) {
        const FockVector v(m);
        for (int n4 : vertex_modes(op, v, kWindow)) {
            for (int c : {kPlus, kMinus}) {
                const FockVector res = op.apply(c, n4, q.apply(v)) + q.apply(op.apply(c, n4, v));
                expect_zero(r, res, m, {{"n4", n4}, {"component", c}});
            }
        }
    });
    VerificationReport out("anticommute");
    out.params()["type"] = p.type_str();
    out.params()["pair"] = p.str();
    out.params()["degree"] = degree;
    if (mutation != VertexMutation::none) out.params()["mutation"] = mutation_str(mutation);
    out.merge(body);
    return out;
}

VerificationReport normalization_check(const VertexPair& p) {
    const VertexOperator op(p);
    const BasisMonomial src = highest_weight_vector(p.lambda);
    const BasisMonomial dst = highest_weight_vector(p.mu);
    const FockVector v(src);
    // Both types lead with v+ for 2->1 and 3->4 and with v- for 1->2 and 4->3.
    const int lead = (p.lambda == 2 || p.lambda == 3) ? kPlus : kMinus;

    VerificationReport r("normalization");
    r.params()["type"] = p.type_str();
    r.params()["pair"] = p.str();
    std::set<int> modes;
    for (int c : {kPlus, kMinus}) {
        const auto s = op.support(c, v, 4);
        modes.insert(s.begin(), s.end());
    }
    int lowest = 0;
    bool found = false;
    for (int n4 : modes) {
        if (!op.apply(kPlus, n4, v).is_zero() || !op.apply(kMinus, n4, v).is_zero()) {
            lowest = n4;
            found = true;
            break;
        }
    }
    r.expect(found, src.str(), "lowest mode", "operator vanishes on the highest weight vector");
    if (!found) return r;
    r.expect(lowest == 0, src.str(), "lowest mode", "lowest power of z is " + std::to_string(lowest) + "/4");
    const FockVector got = op.apply(lead, lowest, v);
    expect_zero(r, got - FockVector(dst), src, {{"component", lead}, {"n4", lowest}});
    // The other component at this order lies in the line of f1|mu>; it vanishes when f1|mu> does.
    const FockVector other = op.apply(-lead, lowest, v);
    const FockVector f1mu = AlgebraAction::instance().f(1).apply(FockVector(dst));
    FockVector off_line = other;
    if (!other.is_zero() && !f1mu.is_zero()) {
        const auto& [mono, c] = *f1mu.terms().begin();
        off_line.add_scaled(f1mu, -(other.coeff(mono) / c));
    }
    expect_zero(r, off_line, src, {{"component", -lead}, {"n4", lowest}});
    r.details()["other"] = other.str();
    r.details()["component"] = component_name(lead);
    r.details()["leading"] = got.str();
    return r;
}

// ---------------------------------------------------------------------------
// Two-point function

UScalarSeries two_point_product(int order) {
    const UScalar q = UScalar::u_pow(4);
    return q_binomial_ratio(q.pow(3), q, q.pow(4), order) * q_binomial_ratio(q.pow(6), q.pow(4), q.pow(4), order);
}

namespace {

// 8 * (d-bar shift) + 2 * n4 for a component; constant over modes and states.
int grading_constant(const VertexOperator& op, int c, const FockVector& v) {
    const int trunc = std::max(v.max_degree(), 0) + 4;
    for (int n4 : op.support(c, v, trunc)) {
        const FockVector out = op.apply(c, n4, v);
        if (out.is_zero()) continue;
        return dbar8_of(out.terms().begin()->first) - dbar8_of(v.terms().begin()->first) + 2 * n4;
    }
    throw std::logic_error("vertex component vanishes on the sample state");
}

}  // namespace

TwoPoint two_point(int order, VertexType type) {
    if (order < 0) throw std::invalid_argument("order must be nonnegative");
    const VertexOperator first(VertexPair{type, 1, 2});
    const VertexOperator second(VertexPair{type, 2, 1});
    const FockVector vac(highest_weight_vector(1));
    const FockVector mid(highest_weight_vector(2));
    const UScalarSeries zero({"z"}, order);

    TwoPoint tp;
    tp.components.assign(2, std::vector<UScalarSeries>(2, zero));
    VerificationReport& r = tp.report;
    r = VerificationReport("two-point");
    r.params()["order"] = order;
    r.params()["type"] = type == VertexType::I ? "I" : "II";

    const BasisMonomial vac_m = vac.terms().begin()->first;
    Json z2 = Json::object();
    for (int i1 = 0; i1 < 2; ++i1) {
        const int c1 = i1 == 0 ? kPlus : kMinus;
        // Modes of the first operator start at the normalization mode 0.
        const auto ws = parallel_map<FockVector>(static_cast<std::size_t>(order + 1), [&](std::size_t j) {
            return first.apply(c1, 4 * static_cast<int>(j), vac);
        });
        const FockVector* sample = nullptr;
        for (const auto& w : ws) {
            if (!w.is_zero()) {
                sample = &w;
                break;
            }
        }
        for (int i2 = 0; i2 < 2; ++i2) {
            const int c2 = i2 == 0 ? kPlus : kMinus;
            if (sample == nullptr) continue;
            const int g2 = grading_constant(second, c2, *sample);
            // The pair of modes must bring d-bar back to 0: dbar8(w) + g2 - 2 m4 = 0.
            const auto coeffs = parallel_map<UScalar>(ws.size(), [&](std::size_t j) {
                if (ws[j].is_zero()) return UScalar(0);
                const int total = dbar8_of(ws[j].terms().begin()->first) + g2;
                if (total % 2 != 0) return UScalar(0);
                return extract_vacuum(second.apply(c2, total / 2, ws[j]), vac_m.l1x2, vac_m.l2);
            });
            for (std::size_t j = 0; j < coeffs.size(); ++j) {
                tp.components[i2][i1].add_term({static_cast<int>(j), 0}, coeffs[j]);
            }
            z2[component_name(c2) + component_name(c1)] =
                (dbar8_of(sample->terms().begin()->first) + g2) / 2 + 4 * static_cast<int>(sample - ws.data());
        }
    }
    r.details()["z2_power_times_4"] = z2;
    const auto& pm = tp.components[0][1];
    const auto& mp = tp.components[1][0];
    for (int a : {0, 1}) {
        for (int j = 0; j <= order; ++j) {
            const UScalar c = tp.components[a][a].coeff(j);
            r.expect(c.is_zero(), a == 0 ? "F++" : "F--", "z^" + std::to_string(j), c.str());
        }
    }
    if (type == VertexType::II) {
        r.note("no reference formula for type II; components reported without comparison");
        return tp;
    }
    const UScalar q = UScalar::u_pow(4);
    for (int j = 0; j <= order; ++j) {
        const UScalar d = mp.coeff(j) + q * pm.coeff(j);
        r.expect(d.is_zero(), "F-+ + q F+-", "z^" + std::to_string(j), d.str());
    }
    const UScalar lead = pm.coeff(0);
    r.expect(!lead.is_zero(), "F+-", "z^0", "leading coefficient vanishes");
    if (lead.is_zero()) return tp;
    UScalarSeries normalized = pm;
    normalized *= lead.inverse();
    const UScalarSeries expected = two_point_product(order);
    for (int j = 0; j <= order; ++j) {
        const UScalar d = normalized.coeff(j) - expected.coeff(j);
        r.expect(d.is_zero(), "F+- / F+-(0)", "z^" + std::to_string(j), d.str());
    }
    r.details()["leading"] = lead.str();
    r.details()["normalized"] = normalized.to_json();
    return tp;
}

}  // namespace qfree
