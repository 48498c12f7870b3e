#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qfree/currents.hpp"
#include "qfree/qseries.hpp"
#include "qfree/repcheck.hpp"
#include "qfree/vertexops.hpp"

using namespace qfree;

namespace {

// Folds a batch of reports into one outcome and remembers the first failure.
struct Outcome {
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::string first_failure;

    void add(const VerificationReport& r) {
        checks += r.checks();
        if (r.passed()) return;
        failures += r.failure_count();
        if (first_failure.empty()) first_failure = r.to_json().dump().substr(0, 300);
    }
    void require(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++failures;
        if (first_failure.empty()) first_failure = what;
    }
};

struct Criterion {
    int id;
    std::string title;
    std::function<void(Outcome&)> run;
};

UScalar q_pow(int k) { return UScalar::u_pow(4 * k); }

void drinfeld(Outcome& o) {
    for (const Sector& s : standard_sectors()) {
        for (const char* id : {"R1", "R2", "R3", "R4", "R5", "R6", "R7"}) o.add(check_drinfeld(id, s, 3, 2));
    }
}

void screening(Outcome& o) { o.add(check_screening(3, 4)); }

void ghosts(Outcome& o) { o.add(clifford_check(5)); }

void characters(Outcome& o) {
    for (int i = 1; i <= 4; ++i) o.add(kernel_character(i, 4, 2).report);
}

void star(Outcome& o) {
    o.add(check_star_identity(8));
    for (int l = -5; l <= 5; ++l) o.add(check_S(l, 8));
    for (int l = 0; l <= 2; ++l) o.add(check_jacobi_triple(l, 8));
}

void ope(Outcome& o) {
    for (int id = 1; id <= 8; ++id) o.add(check_ope_formula(id, 8));
}

void weights(Outcome& o) {
    for (int i = 1; i <= 4; ++i) o.add(hw_verify(i));
}

void builders(Outcome& o) { o.add(check_xplus_builders(2, 2)); }

void intertwining(Outcome& o) {
    for (const VertexPair& p : all_vertex_pairs()) {
        for (const std::string& w : intertwining_conditions()) o.add(check_intertwining(p, w, 2, 2));
        o.add(check_screening_anticommute(p, 2));
        o.add(normalization_check(p));
    }
}

void two_point_function(Outcome& o) {
    const TwoPoint tp = two_point(3);
    o.add(tp.report);
    o.require(tp.components[0][0].is_zero() && tp.components[1][1].is_zero(), "F++ or F-- nonzero");
    // Recomputed with the series module: the n = 0 factors of the four products give the numerator
    // q + q^4 - q^3 - q^6 at z^1; the n >= 1 factors sum it geometrically to the closed form.
    const UScalarSeries like({"z"}, 1);
    auto factor = [&](int k) {
        UScalarSeries f = UScalarSeries::constant(like, UScalar(1));
        f.add_term({1, 0}, -q_pow(k));
        return f;
    };
    const UScalar q = q_pow(1);
    const UScalarSeries ratio = factor(3) * factor(6) * (factor(1) * factor(4)).inv();
    const UScalar first = ratio.coeff(1);
    const UScalar expected = (q + q_pow(4) - q_pow(3) - q_pow(6)) / (UScalar(1) - q_pow(4));
    o.require(first == q + q_pow(4) - q_pow(3) - q_pow(6), "n = 0 factors give " + first.str());
    const UScalarSeries f = two_point_product(3);
    o.require(f.coeff(1) == expected, "z^1 coefficient " + f.coeff(1).str());
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "Drinfeld relations R1-R7, four sectors, degree <= 3, |k| <= 2", drinfeld},
        {2, "Screening commutant |k| <= 3, degree <= 4; Q-Q- = 0 to degree 5", screening},
        {3, "Ghost zero modes: eta0^2 = 0, {xi0, eta0} = 1 to degree 5", ghosts},
        {4, "Kernel characters, l in {-2,0,2}, degree <= 4, with alternating sums", characters},
        {5, "Star identity, S_l for |l| <= 5, triple product step l = 0..2, order 8", star},
        {6, "Operator product formulas (1)-(8) to order 8", ope},
        {7, "Highest weight vectors and weights", weights},
        {8, "Difference-operator and M-form builders of X+ agree, degree <= 2, |k| <= 2", builders},
        {9, "Vertex operators: V1-V10, A, B, anticommutation, normalization, degree 2, window 2", intertwining},
        {10, "Two-point function through z^3", two_point_function},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            c.run(o);
        } catch (const std::exception& e) {
            ++o.failures;
            o.first_failure = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = o.failures == 0;
        if (!ok) ++failed;
        std::printf("%s criterion %2d: %s [%zu checks, %.1fs]\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    o.checks, secs);
        if (!ok) std::printf("     first failure: %s\n", o.first_failure.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
