#include <doctest.h>

#include <map>

#include "qfree/currents.hpp"

using namespace qfree;

namespace {

FockVector vec(const std::string& s) { return FockVector(BasisMonomial::parse(s)); }

using ZSeries = std::map<int, FockVector>;  // z-exponent times 4 -> vector

void add_to(ZSeries& s, int e, const FockVector& v, const UScalar& c) {
    s[e].add_scaled(v, c);
    if (s[e].is_zero()) s.erase(e);
}

// Brute-force expansion of one normal-ordered term by raw oscillator actions.
ZSeries oracle_term(const CurrentTerm& t, const FockVector& v, int trunc) {
    const int dmax = std::max(v.max_degree(), 0);
    ZSeries total = {{0, v}};
    ZSeries cur = total;
    for (int s = 1; s <= dmax; ++s) {
        ZSeries next;
        for (const auto& [e, w] : cur) {
            for (const auto& f : t.factors) {
                const auto& info = generator_info(f.name);
                if (!info.annihilation) continue;
                for (int k = 1; k <= dmax; ++k) {
                    const UScalar c = annihilation_coeff(f.name, k) * f.scale.pow(-k) / UScalar(s);
                    add_to(next, e - 4 * k, apply_oscillator(info.family, k, w), c);
                }
            }
        }
        for (const auto& [e, w] : next) add_to(total, e, w, UScalar(1));
        cur = std::move(next);
    }
    ZSeries shifted;
    for (const auto& [e, w] : total) {
        for (const auto& [m, c] : w.terms()) {
            FockVector x(m, c);
            int e4 = e;
            UScalar k(1);
            for (const auto& f : t.factors) {
                const auto& info = generator_info(f.name);
                const int e2 = info.gamma * m.l1x2 + 2 * info.delta * m.l2;
                e4 += 2 * e2;
                if (e2 % 2 == 0) {
                    k *= f.scale.pow(e2 / 2);
                } else {
                    REQUIRE(f.scale.sign > 0);
                    REQUIRE(f.scale.uexp % 2 == 0);
                    k *= UScalar::u_pow(f.scale.uexp / 2 * e2);
                }
                k *= UScalar::u_pow(2 * info.kappa * m.l1x2);
            }
            for (const auto& f : t.factors) {
                const auto& info = generator_info(f.name);
                for (int i = 0; i < std::abs(info.dl1x2) / 2; ++i) x = apply_shift(Family::a, info.dl1x2 > 0 ? 1 : -1, x);
                for (int i = 0; i < std::abs(info.dl2); ++i) x = apply_shift(Family::b, info.dl2 > 0 ? 1 : -1, x);
            }
            add_to(shifted, e4, x, k);
        }
    }
    total = shifted;
    cur = shifted;
    for (int s = 1; s <= trunc; ++s) {
        ZSeries next;
        for (const auto& [e, w] : cur) {
            for (const auto& f : t.factors) {
                const auto& info = generator_info(f.name);
                if (!info.creation) continue;
                for (int k = 1; k <= trunc; ++k) {
                    const UScalar c = creation_coeff(f.name, k) * f.scale.pow(info.sigma * k) / UScalar(s);
                    add_to(next, e + 4 * info.sigma * k, apply_oscillator(info.family, -k, w), c);
                }
            }
        }
        for (const auto& [e, w] : next) add_to(total, e, w, UScalar(1));
        cur = std::move(next);
    }
    ZSeries out;
    for (const auto& [e, w] : total) {
        FockVector kept;
        for (const auto& [m, c] : w.terms()) {
            if (m.degree() <= trunc) kept.add(m, c);
        }
        if (!kept.is_zero()) add_to(out, e + t.zpow4, kept, t.scalar);
    }
    return out;
}

ZSeries oracle(const CurrentExpr& e, const FockVector& v, int trunc) {
    ZSeries out;
    for (const auto& t : e.terms()) {
        for (const auto& [z, w] : oracle_term(t, v, trunc)) add_to(out, z, w, UScalar(1));
    }
    return out;
}

void check_against_oracle(const CurrentExpr& e, const FockVector& v, int trunc) {
    const ZSeries expected = oracle(e, v, trunc);
    const CompiledExpr c(e);
    const std::set<int> support = c.support(v, trunc);
    for (const auto& [z, w] : expected) {
        CHECK_MESSAGE(support.count(z) == 1, e.str(), " mode ", z);
    }
    for (int z : support) {
        auto it = expected.find(z);
        const FockVector want = it == expected.end() ? FockVector() : it->second;
        CHECK_MESSAGE(c.apply(z, v, trunc) == want, e.str(), " mode ", z, " on ", v.str());
    }
}

}  // namespace

TEST_SUITE("currents") {

TEST_CASE("generator table and grammar") {
    CHECK(parse_gen("Yb-") == Gen::YbMinus);
    CHECK(parse_gen("Ya−") == Gen::YaMinus);
    CHECK_THROWS_AS(parse_gen("Yc+"), std::invalid_argument);
    CHECK(generator_info(Gen::YaPlus).dl1x2 == 4);
    CHECK(generator_info(Gen::JPlus).dl1x2 == 2);

    const CurrentExpr e = CurrentExpr::parse("nprod(Ya+@1, Yb+@q, Yb+@1)");
    CHECK(e.str() == "nprod(Ya+@1, Yb+@u^4, Yb+@1)");
    CHECK(CurrentExpr::parse(e.str()).str() == e.str());
    CHECK(Scale::parse("-q^(3/2)") == Scale{-1, 6});
    CHECK(Scale::parse("u^-2") == Scale{1, -2});
    CHECK_THROWS_AS(Scale::parse("q^(1/8)"), std::invalid_argument);
    CHECK_THROWS_AS(CurrentExpr::parse("Ya+ * Yb+"), std::invalid_argument);
    const CurrentExpr x = x_plus_mform();
    CHECK(CurrentExpr::parse(x.str()).simplified().str() == x.str());
    CHECK(nproduct({}).str() == "1");
}

TEST_CASE("q-difference") {
    CHECK(qdifference(CurrentExpr::monomial(UScalar(1), 4)).str() == "1");
    const CurrentExpr d2 = qdifference(CurrentExpr::monomial(UScalar(1), 8));
    REQUIRE(d2.terms().size() == 1);
    CHECK(d2.terms()[0].zpow4 == 4);
    CHECK(d2.terms()[0].scalar == UScalar::u_pow(2) + UScalar::u_pow(-2));
    const CurrentExpr dy = qdifference(generator(Gen::YbPlus));
    REQUIRE(dy.terms().size() == 2);
    std::set<Scale> scales;
    for (const auto& t : dy.terms()) scales.insert(t.factors.at(0).scale);
    CHECK(scales == std::set<Scale>{Scale{1, 2}, Scale{1, -2}});
    // d(f(cz)) = c (df)(cz)
    const CurrentExpr f = generator(Gen::YaPlus) + CurrentExpr::monomial(UScalar(3), 8);
    const Scale c{1, 3};
    CHECK(qdifference(f.rescaled(c)).str() == (c.value() * qdifference(f).rescaled(c)).simplified().str());
}

TEST_CASE("screening and ghost modes") {
    const CurrentExpr qm = generator(Gen::YbMinus);
    CHECK(apply_mode(qm, -4, vec("|0,1>"), 4) == vec("|0,0>"));
    CHECK(apply_mode(qm, -4, vec("|0,0>"), 4).is_zero());
    CHECK(apply_mode(qm, -4, vec("b[-1]|1,1>"), 4).is_zero());
    CHECK(apply_mode(generator(Gen::YbPlus), 0, vec("|0,0>"), 1) == vec("|0,1>"));
}

TEST_CASE("mode support") {
    const CurrentExpr qm = generator(Gen::YbMinus);
    CHECK(mode_support(qm, vec("|0,0>"), 2) == std::set<int>{0, 4, 8});
    CHECK(mode_support(qm, FockVector(), 2).empty());
    const FockVector v = vec("a[-1]b[-2]|1/2,1>");
    const auto small = mode_support(x_minus(), v, 3);
    const auto large = mode_support(x_minus(), v, 5);
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
}

TEST_CASE("mode application against brute-force expansion") {
    const std::vector<FockVector> states = {vec("|0,0>"), vec("a[-1]|1,-1>"), vec("b[-2]|0,2>"),
                                            vec("a[-1]b[-1]|-1,0>") + UScalar(2) * vec("a[-2]|-1,0>")};
    const std::vector<CurrentExpr> exprs = {
        generator(Gen::YaPlus),         generator(Gen::YaMinus, {1, 2}), generator(Gen::YbPlus),
        generator(Gen::YbMinus, {-1, 3}), generator(Gen::JPlus, {1, 6}),  generator(Gen::JMinus),
        generator(Gen::Psi),            generator(Gen::Phi),             m_plus(1),
        m_minus(),                      qdifference(generator(Gen::YbPlus)),
    };
    for (const auto& e : exprs) {
        for (const auto& v : states) check_against_oracle(e, v, 3);
    }
    check_against_oracle(generator(Gen::JPlus), vec("a[-1]|1/2,0>"), 3);
}

TEST_CASE("contraction series") {
    const CurrentTerm p{UScalar(1), 0, {GeneratorFactor{Gen::YbPlus, {}}}};
    const CurrentTerm m{UScalar(1), 0, {GeneratorFactor{Gen::YbMinus, {}}}};
    const Contraction c3 = contraction_series(p, p, 8);
    CHECK(c3.zexp4 == 4);
    CHECK(c3.series.terms().size() == 2);
    CHECK(c3.series.coeff(1) == UScalar(-1));
    const Contraction c4 = contraction_series(p, m, 8);
    CHECK(c4.zexp4 == -4);
    for (int n = 0; n <= 8; ++n) CHECK(c4.series.coeff(n) == UScalar(1));
    const CurrentTerm phi{UScalar(1), 0, {GeneratorFactor{Gen::Phi, {}}}};
    CHECK_THROWS_AS(contraction_series(p, phi, 4), std::invalid_argument);
}

TEST_CASE("operator product formulas") {
    for (int id = 1; id <= 8; ++id) {
        const VerificationReport r = check_ope_formula(id, 8);
        CHECK_MESSAGE(r.passed(), "formula ", id, ": ", r.to_json().dump());
    }
    const VerificationReport bad = check_ope_formula(4, 8, true);
    CHECK_FALSE(bad.passed());
    REQUIRE_FALSE(bad.failures().empty());
    CHECK(bad.failures().front().basis == "x^1");
}

TEST_CASE("two builders of X+ agree") {
    const CompiledExpr mform(x_plus_mform());
    const CompiledExpr dform(x_plus_dform());
    for (int l1x2 : {-1, 0, 2}) {
        for (int l2 : {-1, 0, 1}) {
            for (int d = 0; d <= 2; ++d) {
                for (const auto& m : enumerate_basis(l1x2, l2, d)) {
                    const FockVector v(m);
                    std::set<int> modes = mform.support(v, 3);
                    const auto more = dform.support(v, 3);
                    modes.insert(more.begin(), more.end());
                    for (int n4 : modes) CHECK_MESSAGE(mform.apply(n4, v, 3) == dform.apply(n4, v, 3), m.str(), " ", n4);
                }
            }
        }
    }
}

}  // TEST_SUITE
