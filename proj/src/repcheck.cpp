#include "qfree/repcheck.hpp"

#include <cctype>
#include <cstdlib>
#include <functional>
#include <stdexcept>

#include "check_util.hpp"
#include "qfree/parallel.hpp"

namespace qfree {

namespace {

using detail::expect_zero;
using detail::per_vector;
using detail::residual_str;

LinearOperator diagonal(std::function<UScalar(const BasisMonomial&)> eigen) {
    return LinearOperator([eigen = std::move(eigen)](const BasisMonomial& m) { return FockVector(m, eigen(m)); });
}

}  // namespace

// ---------------------------------------------------------------------------
// Sectors

std::string Sector::str() const { return "(" + half_str(l1x2) + "," + std::to_string(l2) + ")"; }

Json Sector::to_json() const {
    Json j = Json::array();
    if (l1x2 % 2 == 0) {
        j.push_back(l1x2 / 2);
    } else {
        j.push_back(l1x2 / 2.0);
    }
    j.push_back(l2);
    return j;
}

Sector Sector::parse(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '[' && c != ']') s += c;
    }
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("sector must be 'l1,l2': '" + text + "'");
    const std::string a = s.substr(0, comma);
    const std::string b = s.substr(comma + 1);
    auto to_int = [&](const std::string& x) {
        std::size_t pos = 0;
        const int v = std::stoi(x, &pos);
        if (pos != x.size()) throw std::invalid_argument("bad sector '" + text + "'");
        return v;
    };
    Sector out;
    try {
        const auto slash = a.find('/');
        if (slash == std::string::npos) {
            out.l1x2 = 2 * to_int(a);
        } else {
            if (to_int(a.substr(slash + 1)) != 2) throw std::invalid_argument("l1 must be a half-integer");
            out.l1x2 = to_int(a.substr(0, slash));
            if (out.l1x2 % 2 == 0) throw std::invalid_argument("l1 must be a half-integer");
        }
        out.l2 = to_int(b);
    } catch (const std::logic_error&) {
        throw std::invalid_argument("bad sector '" + text + "'");
    }
    return out;
}

const std::vector<Sector>& standard_sectors() {
    static const std::vector<Sector> s = {{0, 0}, {2, 1}, {-1, 0}, {-3, -1}};
    return s;
}

Sector family_offset(int i) {
    switch (i) {
        case 1: return {0, 0};
        case 2: return {2, 1};
        case 3: return {-1, 0};
        case 4: return {1, 1};
        default: throw std::invalid_argument("family index must be 1..4");
    }
}

std::vector<BasisMonomial> basis_up_to(Sector s, int max_degree) {
    std::vector<BasisMonomial> out;
    for (int d = 0; d <= max_degree; ++d) {
        const auto& b = enumerate_basis(s.l1x2, s.l2, d);
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Algebra action

const AlgebraAction& AlgebraAction::instance(bool dform) {
    static const AlgebraAction mform_action(false);
    static const AlgebraAction dform_action(true);
    return dform ? dform_action : mform_action;
}

AlgebraAction::AlgebraAction(bool dform)
    : x_plus_(dform ? x_plus_dform() : x_plus_mform()),
      x_minus_(x_minus()),
      psi_(psi_current()),
      phi_(phi_current()),
      eta_(generator(Gen::YbMinus)),
      xi_(generator(Gen::YbPlus)) {}

UScalar AlgebraAction::gamma() { return UScalar::u_pow(-2); }

LinearOperator AlgebraAction::cached(const std::string& key, const std::function<LinearOperator()>& make) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = ops_.find(key); it != ops_.end()) return it->second;
    }
    LinearOperator built = make();
    std::lock_guard lock(mutex_);
    return ops_.emplace(key, std::move(built)).first->second;
}

LinearOperator AlgebraAction::x(int sign, int k) const {
    return (sign > 0 ? x_plus_ : x_minus_).mode(drinfeld_mode(k));
}

LinearOperator AlgebraAction::psi(int m) const { return psi_.mode(-4 * m); }
LinearOperator AlgebraAction::phi(int m) const { return phi_.mode(4 * m); }
LinearOperator AlgebraAction::eta0() const { return eta_.mode(-4); }
LinearOperator AlgebraAction::xi0() const { return xi_.mode(0); }

LinearOperator AlgebraAction::h(int k) const {
    if (k == 0) throw std::invalid_argument("h_0 is not a generator");
    return cached("h" + std::to_string(k), [k] {
        return LinearOperator([k](const BasisMonomial& m) { return apply_oscillator(Family::a, k, FockVector(m)); });
    });
}

LinearOperator AlgebraAction::K(int power) const {
    return cached("K" + std::to_string(power), [power] {
        return diagonal([power](const BasisMonomial& m) { return UScalar::u_pow(2 * power * m.l1x2); });
    });
}

LinearOperator AlgebraAction::e(int i) const {
    if (i == 1) return x(1, 0);
    if (i == 0) return cached("e0", [this] { return compose(x(-1, 1), K(-1)); });
    throw std::invalid_argument("Chevalley index must be 0 or 1");
}

LinearOperator AlgebraAction::f(int i) const {
    if (i == 1) return x(-1, 0);
    if (i == 0) return cached("f0", [this] { return compose(K(1), x(1, -1)); });
    throw std::invalid_argument("Chevalley index must be 0 or 1");
}

LinearOperator AlgebraAction::t(int i, int power) const {
    if (i == 1) return K(power);
    if (i == 0) {
        return cached("t0^" + std::to_string(power), [power] {
            return diagonal([power](const BasisMonomial& m) {
                return gamma().pow(power) * UScalar::u_pow(-2 * power * m.l1x2);
            });
        });
    }
    throw std::invalid_argument("Chevalley index must be 0 or 1");
}

LinearOperator compose(const LinearOperator& a, const LinearOperator& b) {
    return LinearOperator([a, b](const BasisMonomial& m) { return a.apply(b.column(m)); });
}

// ---------------------------------------------------------------------------
// Drinfeld relations

namespace {

void check_r1(VerificationReport& r, const BasisMonomial& m, const AlgebraAction& A) {
    const FockVector v(m);
    expect_zero(r, A.K(1).apply(A.K(-1).apply(v)) - v, m, {{"K K^-1", 1}});
    expect_zero(r, A.K(-1).apply(A.K(1).apply(v)) - v, m, {{"K^-1 K", 1}});
    // K and q^d are both diagonal on the monomial basis, so they commute.
    const FockVector kv = A.K(1).apply(v);
    r.expect(kv.size() == 1 && kv.terms().begin()->first == m, m.str(), "K diagonal", residual_str(kv));
}

void check_r2(VerificationReport& r, const BasisMonomial& m, int window, const AlgebraAction& A) {
    const FockVector v(m);
    const int d8 = dbar8_of(m);
    auto graded = [&](const FockVector& out, int k, const std::string& name) {
        FockVector bad;
        for (const auto& [n, c] : out.terms()) {
            if (dbar8_of(n) != d8 + 8 * k) bad.add(n, c);
        }
        expect_zero(r, bad, m, {{name, k}});
    };
    for (int k = -window; k <= window; ++k) {
        if (k != 0) graded(A.h(k).apply(v), k, "h");
        graded(A.x(1, k).apply(v), k, "x+");
        graded(A.x(-1, k).apply(v), k, "x-");
    }
}

void check_r3(VerificationReport& r, const BasisMonomial& m, int window, const AlgebraAction& A) {
    const FockVector v(m);
    for (int k = -window; k <= window; ++k) {
        if (k == 0) continue;
        for (int l = -window; l <= window; ++l) {
            if (l == 0) continue;
            FockVector res = A.h(k).apply(A.h(l).apply(v)) - A.h(l).apply(A.h(k).apply(v));
            if (k + l == 0) res.add_scaled(v, -(qint(2 * k) * qint_half(-k) / UScalar(k)));
            expect_zero(r, res, m, {{"k", k}, {"l", l}});
        }
        expect_zero(r, A.h(k).apply(A.K(1).apply(v)) - A.K(1).apply(A.h(k).apply(v)), m, {{"k", k}, {"K", 1}});
    }
}

void check_r4(VerificationReport& r, const BasisMonomial& m, int window, const AlgebraAction& A) {
    const FockVector v(m);
    for (int sign : {1, -1}) {
        const std::string xs = sign > 0 ? "x+" : "x-";
        for (int l = -window; l <= window; ++l) {
            const FockVector conj = A.K(1).apply(A.x(sign, l).apply(A.K(-1).apply(v)));
            expect_zero(r, conj - UScalar::u_pow(8 * sign) * A.x(sign, l).apply(v), m, {{"K " + xs, l}});
            for (int k = -window; k <= window; ++k) {
                if (k == 0) continue;
                FockVector res = A.h(k).apply(A.x(sign, l).apply(v)) - A.x(sign, l).apply(A.h(k).apply(v));
                const UScalar c = UScalar(sign) * qint(2 * k) / UScalar(k) * UScalar::u_pow(sign * std::abs(k));
                res.add_scaled(A.x(sign, k + l).apply(v), -c);
                expect_zero(r, res, m, {{"k", k}, {xs, l}});
            }
        }
    }
}

// x_{k+1} x_l - Q x_l x_{k+1} - Q x_k x_{l+1} + x_{l+1} x_k = 0 with Q = q^(2 sign).
void check_r56(VerificationReport& r, const BasisMonomial& m, int window, int sign, const AlgebraAction& A) {
    const FockVector v(m);
    const UScalar qq = UScalar::u_pow(8 * sign);
    auto xx = [&](int a, int b) { return A.x(sign, a).apply(A.x(sign, b).apply(v)); };
    for (int k = -window; k <= window; ++k) {
        for (int l = -window; l <= window; ++l) {
            FockVector res = xx(k + 1, l);
            res.add_scaled(xx(l, k + 1), -qq);
            res.add_scaled(xx(k, l + 1), -qq);
            res += xx(l + 1, k);
            expect_zero(r, res, m, {{"k", k}, {"l", l}});
        }
    }
}

void check_r7(VerificationReport& r, const BasisMonomial& m, int window, const AlgebraAction& A) {
    const FockVector v(m);
    const UScalar inv = u_binomial_inverse(4, -4);
    for (int k = -window; k <= window; ++k) {
        for (int l = -window; l <= window; ++l) {
            FockVector res = A.x(1, k).apply(A.x(-1, l).apply(v)) - A.x(-1, l).apply(A.x(1, k).apply(v));
            res.add_scaled(A.psi(k + l).apply(v), -(UScalar::u_pow(l - k) * inv));
            res.add_scaled(A.phi(k + l).apply(v), UScalar::u_pow(k - l) * inv);
            expect_zero(r, res, m, {{"k", k}, {"l", l}});
        }
    }
}

}  // namespace

VerificationReport check_drinfeld(const std::string& id, Sector sector, int degree, int window,
                                  const AlgebraAction& action) {
    if (window < 1) throw std::invalid_argument("mode window must be at least 1");
    if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
    std::function<void(VerificationReport&, const BasisMonomial&)> check;
    const AlgebraAction& A = action;
    if (id == "R1") {
        check = [&](VerificationReport& r, const BasisMonomial& m) { check_r1(r, m, A); };
    } else if (id == "R2") {
        check = [&](VerificationReport& r, const BasisMonomial& m) { check_r2(r, m, window, A); };
    } else if (id == "R3") {
        check = [&](VerificationReport& r, const BasisMonomial& m) { check_r3(r, m, window, A); };
    } else if (id == "R4") {
        check = [&](VerificationReport& r, const BasisMonomial& m) { check_r4(r, m, window, A); };
    } else if (id == "R5") {
        check = [&](VerificationReport& r, const BasisMonomial& m) { check_r56(r, m, window, -1, A); };
    } else if (id == "R6") {
        check = [&](VerificationReport& r, const BasisMonomial& m) { check_r56(r, m, window, 1, A); };
    } else if (id == "R7") {
        check = [&](VerificationReport& r, const BasisMonomial& m) { check_r7(r, m, window, A); };
    } else {
        throw std::invalid_argument("unknown relation '" + id + "'");
    }
    VerificationReport report = per_vector(id, basis_up_to(sector, degree), check);
    VerificationReport out(id);
    out.params()["sector"] = sector.to_json();
    out.params()["degree"] = degree;
    out.params()["window"] = window;
    out.merge(report);
    return out;
}

// ---------------------------------------------------------------------------
// Screening

namespace {

std::vector<Sector> family_sectors(const std::vector<int>& ls) {
    std::vector<Sector> out;
    for (int i = 1; i <= 4; ++i) {
        const Sector off = family_offset(i);
        for (int l : ls) out.push_back(Sector{off.l1x2 + 2 * l, off.l2 + l});
    }
    return out;
}

}  // namespace

VerificationReport check_screening(int kmax, int degree, bool mutate) {
    if (kmax < 0) throw std::invalid_argument("kmax must be nonnegative");
    const AlgebraAction& A = AlgebraAction::instance();
    const LinearOperator q = mutate ? CompiledExpr(generator(Gen::YbPlus)).mode(-4) : A.eta0();
    std::vector<BasisMonomial> basis;
    for (const Sector& s : family_sectors({-2, 0, 2})) {
        auto b = basis_up_to(s, degree + 1);
        basis.insert(basis.end(), b.begin(), b.end());
    }
    VerificationReport body = per_vector("screening", basis, [&](VerificationReport& r, const BasisMonomial& m) {
        const FockVector v(m);
        auto comm = [&](const LinearOperator& x) { return x.apply(q.apply(v)) - q.apply(x.apply(v)); };
        expect_zero(r, q.apply(q.apply(v)), m, {{"QQ", 0}});
        if (m.degree() > degree) return;
        for (int k = -kmax; k <= kmax; ++k) {
            expect_zero(r, comm(A.x(1, k)), m, {{"x+", k}});
            expect_zero(r, comm(A.x(-1, k)), m, {{"x-", k}});
            if (k != 0) expect_zero(r, comm(A.h(k)), m, {{"h", k}});
        }
        expect_zero(r, comm(A.K(1)), m, {{"K", 1}});
    });
    VerificationReport out("screening");
    out.params()["kmax"] = kmax;
    out.params()["degree"] = degree;
    if (mutate) out.params()["mutation"] = "integrand Yb+";
    out.merge(body);
    return out;
}

VerificationReport check_xplus_builders(int degree, int window) {
    if (window < 0) throw std::invalid_argument("mode window must be nonnegative");
    const AlgebraAction& m_form = AlgebraAction::instance();
    const AlgebraAction& d_form = AlgebraAction::instance(true);
    std::vector<BasisMonomial> basis;
    for (const Sector& s : standard_sectors()) {
        auto b = basis_up_to(s, degree);
        basis.insert(basis.end(), b.begin(), b.end());
    }
    VerificationReport body = per_vector("x+ builders", basis, [&](VerificationReport& r, const BasisMonomial& m) {
        const FockVector v(m);
        for (int k = -window; k <= window; ++k) {
            expect_zero(r, m_form.x(1, k).apply(v) - d_form.x(1, k).apply(v), m, {{"k", k}});
        }
    });
    VerificationReport out("x+ builders");
    out.params()["degree"] = degree;
    out.params()["window"] = window;
    out.merge(body);
    return out;
}

VerificationReport clifford_check(int degree) {
    const AlgebraAction& A = AlgebraAction::instance();
    std::vector<BasisMonomial> basis;
    for (const Sector& s : family_sectors({-2, 0, 2})) {
        auto b = basis_up_to(s, degree);
        basis.insert(basis.end(), b.begin(), b.end());
    }
    VerificationReport body = per_vector("clifford", basis, [&](VerificationReport& r, const BasisMonomial& m) {
        const FockVector v(m);
        const LinearOperator eta = A.eta0();
        const LinearOperator xi = A.xi0();
        expect_zero(r, eta.apply(eta.apply(v)), m, {{"eta0^2", 0}});
        expect_zero(r, xi.apply(eta.apply(v)) + eta.apply(xi.apply(v)) - v, m, {{"xi0 eta0 + eta0 xi0 - 1", 0}});
    });
    VerificationReport out("clifford");
    out.params()["degree"] = degree;
    out.merge(body);
    return out;
}

// ---------------------------------------------------------------------------
// Kernels and characters

ScalarMatrix screening_matrix(Sector s, int degree) {
    const auto& source = enumerate_basis(s.l1x2, s.l2, degree);
    const int target_degree = screening_target_degree(s, degree);
    if (target_degree < 0) return ScalarMatrix();
    const auto& target = enumerate_basis(s.l1x2, s.l2 - 1, target_degree);
    const LinearOperator q = AlgebraAction::instance().eta0();
    const auto columns =
        parallel_map<FockVector>(source.size(), [&](std::size_t j) { return q.column(source[j]); });
    ScalarMatrix m(target.size(), std::vector<UScalar>(source.size()));
    for (std::size_t i = 0; i < target.size(); ++i) {
        for (std::size_t j = 0; j < source.size(); ++j) m[i][j] = columns[j].coeff(target[i]);
    }
    return m;
}

std::size_t kernel_dimension(Sector s, int degree) {
    if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
    const std::size_t n = enumerate_basis(s.l1x2, s.l2, degree).size();
    return n - matrix_rank(screening_matrix(s, degree)).rank;
}

namespace {

std::size_t rank_of_screening(Sector s, int degree) {
    if (degree < 0) return 0;
    return matrix_rank(screening_matrix(s, degree)).rank;
}

long p2(int d) { return d < 0 ? 0 : static_cast<long>(two_colored_partitions(d)); }

}  // namespace

KernelCharacter kernel_character(int i, int maxdeg, int mwindow) {
    if (maxdeg < 0) throw std::invalid_argument("maxdeg must be nonnegative");
    if (mwindow < 0) throw std::invalid_argument("mwindow must be nonnegative");
    const Sector off = family_offset(i);
    const bool first_pair = i <= 2;
    std::vector<Sector> sectors;
    for (int l = -mwindow - (mwindow % 2 != 0 ? 1 : 0); l <= mwindow; l += 2) {
        if (std::abs(l) <= mwindow) sectors.push_back(Sector{off.l1x2 + 2 * l, off.l2 + l});
    }
    // Position of a (sector, degree) coefficient in (s, t).
    auto position = [&](const Sector& s, int d) -> std::array<int, 2> {
        if (first_pair) {
            const int m = s.l1x2 / 2;
            return {2 * d - m, -m};
        }
        return {2 * d, -s.l2};
    };
    int tmax = 0;
    int smax = 0;
    for (const auto& s : sectors) {
        for (int d = 0; d <= maxdeg; ++d) {
            const auto pos = position(s, d);
            tmax = std::max(tmax, std::abs(pos[1]));
            smax = std::max(smax, pos[0]);
        }
    }
    const int order = (smax + 1) / 2 + 1;
    const Window window{-tmax, tmax};
    const RationalSeries product = first_pair ? product_character_12(order, window) : product_character_34(order, window);

    KernelCharacter out{RationalSeries({"s", "t"}, 2 * order, window), VerificationReport("kernel-character")};
    VerificationReport& report = out.report;
    report.params()["family"] = i;
    report.params()["degree"] = maxdeg;
    report.params()["window"] = mwindow;
    Json table = Json::array();
    for (const auto& s : sectors) {
        for (int d = 0; d <= maxdeg; ++d) {
            const std::size_t n = enumerate_basis(s.l1x2, s.l2, d).size();
            const std::size_t rank0 = rank_of_screening(s, d);
            const long kernel = static_cast<long>(n - rank0);
            // Alternating sum along the resolution F_{l2} -> F_{l2-1} -> ...
            long alternating = 0;
            // Degrees d_j = d_(j-1) + l2 - j shrink once j >= l2, so the sum ends at the first negative one.
            int dj = d;
            for (int j = 0;; ++j) {
                if (j > 0) dj += s.l2 - j;
                if (dj < 0 && j >= s.l2) break;
                alternating += (j % 2 == 0 ? 1 : -1) * p2(dj);
            }
            const auto pos = position(s, d);
            const Rational expected = product.coeff(pos[0], pos[1]);
            const std::string where = "sector " + s.str() + " degree " + std::to_string(d);
            report.expect(Rational(kernel) == expected, where, "product form",
                          "kernel " + std::to_string(kernel) + " vs " + expected.get_str());
            report.expect(kernel == alternating, where, "alternating sum",
                          "kernel " + std::to_string(kernel) + " vs " + std::to_string(alternating));
            // Exactness at F_{l2-1} and F_{l2-2}: kernel there equals the incoming image.
            const Sector s1{s.l1x2, s.l2 - 1};
            const int d1 = screening_target_degree(s, d);
            if (d1 >= 0) {
                const std::size_t rank1 = rank_of_screening(s1, d1);
                const long ker1 = p2(d1) - static_cast<long>(rank1);
                report.expect(ker1 == static_cast<long>(rank0), where, "exactness at position 1",
                              std::to_string(ker1) + " vs " + std::to_string(rank0));
                const Sector s2{s.l1x2, s.l2 - 2};
                const int d2 = screening_target_degree(s1, d1);
                if (d2 >= 0) {
                    const long ker2 = p2(d2) - static_cast<long>(rank_of_screening(s2, d2));
                    report.expect(ker2 == static_cast<long>(rank1), where, "exactness at position 2",
                                  std::to_string(ker2) + " vs " + std::to_string(rank1));
                }
            }
            if (kernel != 0) out.series.add_term(pos, Rational(kernel));
            table.push_back(Json{{"sector", s.to_json()},
                                 {"degree", d},
                                 {"kernel", kernel},
                                 {"alternating", alternating},
                                 {"product", expected.get_str()}});
        }
    }
    report.details()["dimensions"] = table;
    return out;
}

// ---------------------------------------------------------------------------
// Highest weights

BasisMonomial highest_weight_vector(int i) {
    switch (i) {
        case 1: return BasisMonomial::parse("|0,0>");
        case 2: return BasisMonomial::parse("b[-1]|1,1>");
        case 3: return BasisMonomial::parse("|-1/2,0>");
        case 4: return BasisMonomial::parse("|-3/2,-1>");
        default: throw std::invalid_argument("highest weight index must be 1..4");
    }
}

Weight highest_weight(int i) {
    switch (i) {
        case 1: return Weight{Rational(-1, 2), Rational(0), Rational(0)};
        case 2: return Weight{Rational(-3, 2), Rational(1), Rational(-1, 2)};
        case 3: return Weight{Rational(0), Rational(-1, 2), Rational(1, 8)};
        case 4: return Weight{Rational(1), Rational(-3, 2), Rational(1, 8)};
        default: throw std::invalid_argument("highest weight index must be 1..4");
    }
}

VerificationReport hw_verify(int i) {
    const AlgebraAction& A = AlgebraAction::instance();
    const BasisMonomial m = highest_weight_vector(i);
    const Weight w = highest_weight(i);
    const FockVector v(m);
    VerificationReport r("hw");
    r.params()["family"] = i;
    r.params()["vector"] = m.str();
    expect_zero(r, A.e(0).apply(v), m, {{"e0", 1}});
    expect_zero(r, A.e(1).apply(v), m, {{"e1", 1}});
    expect_zero(r, A.eta0().apply(v), m, {{"Q-", 1}});
    // t1 = q^(lambda1), t0 = q^(lambda0): both exponents are multiples of 1/4.
    auto qpow = [](const Rational& x) {
        const Rational e = x * 4;
        if (e.get_den() != 1) throw std::logic_error("weight coefficient is not a multiple of 1/4");
        return UScalar::u_pow(static_cast<int>(e.get_num().get_si()));
    };
    expect_zero(r, A.t(1).apply(v) - qpow(w.lambda1) * v, m, {{"t1", 1}});
    expect_zero(r, A.t(0).apply(v) - qpow(w.lambda0) * v, m, {{"t0", 1}});
    r.expect(dbar_of(m) == w.delta, m.str(), "d", dbar_of(m).get_str() + " vs " + w.delta.get_str());
    r.expect(weight_of(m) == w, m.str(), "weight", weight_of(m).str() + " vs " + w.str());
    r.expect(w.level() == Rational(-1, 2), m.str(), "level", w.level().get_str());
    const Sector off = family_offset(i);
    const int l = m.l2 - off.l2;
    r.expect(m.l1x2 - off.l1x2 == 2 * l && l % 2 == 0, m.str(), "family", "not in F_" + std::to_string(i));
    r.details()["weight"] = weight_of(m).str();
    return r;
}

}  // namespace qfree
