#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qfree/uscalar.hpp"

namespace qfree {

using ScalarMatrix = std::vector<std::vector<UScalar>>;  // row-major
using RationalMatrix = std::vector<std::vector<Rational>>;

/// How ranks over Q(u) are computed: exact rank at rational points of u, with
/// symbolic elimination when the points disagree or when forced.
struct RankPolicy {
    std::vector<Rational> points;  // empty: drawn from a fixed-seed generator
    bool symbolic = false;
};

void set_rank_policy(RankPolicy policy);
RankPolicy rank_policy();

struct RankResult {
    std::size_t rank = 0;
    std::string method;  // "specialized" or "symbolic"
};

std::size_t rational_rank(RationalMatrix m);
std::size_t symbolic_rank(ScalarMatrix m);
RankResult matrix_rank(const ScalarMatrix& m, const RankPolicy& policy = rank_policy());

}  // namespace qfree
