#include <doctest.h>

#include "qfree/linalg.hpp"
#include "qfree/parallel.hpp"

using namespace qfree;

namespace {

UScalar u(int k) { return UScalar::u_pow(k); }

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("rational rank") {
    CHECK(rational_rank({}) == 0);
    CHECK(rational_rank({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}) == 1);
    CHECK(rational_rank({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}, {Rational(1), Rational(1)}}) == 2);
    CHECK(rational_rank({{Rational(0), Rational(0)}}) == 0);
}

TEST_CASE("symbolic rank") {
    // det = 1 - u^2 vanishes only at special points
    const ScalarMatrix m = {{UScalar(1), u(1)}, {u(1), UScalar(1)}};
    CHECK(symbolic_rank(m) == 2);
    const ScalarMatrix dependent = {{u(1), u(2)}, {u(-1), UScalar(1)}, {UScalar(3) * u(1), UScalar(3) * u(2)}};
    CHECK(symbolic_rank(dependent) == 1);
}

TEST_CASE("rank by specialization falls back on disagreement") {
    const ScalarMatrix m = {{UScalar(1), u(1)}, {u(1), UScalar(1)}};
    const RankResult bad_points = matrix_rank(m, RankPolicy{{Rational(1), Rational(2)}, false});
    CHECK(bad_points.rank == 2);
    CHECK(bad_points.method == "symbolic");
    const RankResult good = matrix_rank(m, RankPolicy{{Rational(2), Rational(3)}, false});
    CHECK(good.rank == 2);
    CHECK(good.method == "specialized");
    // A pole at the first point is skipped.
    const ScalarMatrix pole = {{(u(1) - UScalar(2)).inverse(), UScalar(1)}};
    CHECK(matrix_rank(pole, RankPolicy{{Rational(2), Rational(3), Rational(5)}, false}).rank == 1);
    CHECK(matrix_rank(m, RankPolicy{{}, true}).method == "symbolic");
}

TEST_CASE("parallel map keeps order and rethrows") {
    const int saved = worker_count();
    set_worker_count(3);
    const auto sq = parallel_map<int>(50, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == static_cast<int>(i * i));
    CHECK_THROWS_AS(parallel_map<int>(10, [](std::size_t i) -> int {
                        if (i == 7) throw std::runtime_error("boom");
                        return 0;
                    }),
                    std::runtime_error);
    set_worker_count(saved);
}

}  // TEST_SUITE
