#include <doctest.h>

#include "qfree/vertexops.hpp"

using namespace qfree;

namespace {

UScalar q_pow(int k) { return UScalar::u_pow(4 * k); }

}  // namespace

TEST_SUITE("vertexops") {

TEST_CASE("pair labels") {
    const VertexPair p = VertexPair::parse("II", "4->3");
    CHECK(p.type == VertexType::II);
    CHECK(p.lambda == 4);
    CHECK(p.mu == 3);
    CHECK(p.str() == "4->3");
    CHECK(p.to_json().dump() == R"({"type":"II","pair":"4->3"})");
    CHECK_THROWS_AS(VertexPair::parse("I", "1->3"), std::invalid_argument);
    CHECK_THROWS_AS(VertexPair::parse("III", "1->2"), std::invalid_argument);
    CHECK(all_vertex_pairs().size() == 8);
}

TEST_CASE("normalization") {
    for (const VertexPair& p : all_vertex_pairs()) {
        const VerificationReport r = normalization_check(p);
        CHECK_MESSAGE(r.passed(), p.type_str(), " ", p.str(), ": ", r.to_json().dump());
    }
}

TEST_CASE("intertwining conditions at low degree") {
    for (const VertexPair& p : all_vertex_pairs()) {
        for (const std::string& w : intertwining_conditions()) {
            const VerificationReport r = check_intertwining(p, w, 1, 1);
            CHECK_MESSAGE(r.passed(), w, " ", p.type_str(), " ", p.str(), ": ", r.to_json().dump());
            CHECK(r.checks() > 0);
        }
    }
    CHECK_THROWS_AS(check_intertwining(all_vertex_pairs()[0], "V11", 1, 1), std::invalid_argument);
}

TEST_CASE("screening anticommutes with the vertex operators") {
    for (const VertexPair& p : all_vertex_pairs()) {
        const VerificationReport r = check_screening_anticommute(p, 1);
        CHECK_MESSAGE(r.passed(), p.type_str(), " ", p.str(), ": ", r.to_json().dump());
    }
}

TEST_CASE("mutations") {
    for (const VertexPair& p : all_vertex_pairs()) {
        // {Q-, Yb+(w)} is a constant, which the q-difference removes at any scale.
        CHECK(check_screening_anticommute(p, 1, VertexMutation::scale).passed());
        CHECK_FALSE(check_screening_anticommute(p, 1, VertexMutation::ghost).passed());
        CHECK_FALSE(check_intertwining(p, "A", 1, 1, VertexMutation::scale).passed());
    }
}

TEST_CASE("two-point function") {
    const int order = 3;
    const TwoPoint tp = two_point(order);
    CHECK_MESSAGE(tp.report.passed(), tp.report.to_json().dump());
    CHECK(tp.components[0][0].is_zero());
    CHECK(tp.components[1][1].is_zero());

    // Independent oracle: F(z) (1 - q z)(1 - q^4 z) = F(q^4 z)(1 - q^3 z)(1 - q^6 z) with F(0) = 1
    // determines the product uniquely.
    const UScalarSeries got = two_point_product(order);
    CHECK(got.coeff(0) == UScalar(1));
    UScalarSeries shifted = got.empty_like();
    for (int j = 0; j <= order; ++j) shifted.add_term({j, 0}, got.coeff(j) * q_pow(4 * j));
    auto linear = [&](int k) {
        UScalarSeries f = UScalarSeries::constant(got, UScalar(1));
        f.add_term({1, 0}, -q_pow(k));
        return f;
    };
    CHECK(got * linear(1) * linear(4) == shifted * linear(3) * linear(6));

    const UScalar q = q_pow(1);
    const UScalar z1 = (q + q_pow(4) - q_pow(3) - q_pow(6)) / (UScalar(1) - q_pow(4));
    CHECK(got.coeff(1) == z1);

    const TwoPoint t2 = two_point(1, VertexType::II);
    CHECK(t2.report.passed());
}

}  // TEST_SUITE
