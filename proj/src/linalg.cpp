#include "qfree/linalg.hpp"

#include <mutex>
#include <random>

namespace qfree {

namespace {

std::mutex policy_mutex;
RankPolicy global_policy;

// Deterministic stream of sample points p/q.
class PointStream {
public:
    Rational next() {
        std::uniform_int_distribution<int> num(2, 997);
        std::uniform_int_distribution<int> den(1, 991);
        Rational r(num(rng_), den(rng_));
        r.canonicalize();
        return r;
    }

private:
    std::mt19937 rng_{0x5eedu};
};

template <class T, class IsZero, class Eliminate>
std::size_t eliminate(std::vector<std::vector<T>>& m, IsZero is_zero, Eliminate reduce) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && is_zero(m[p][c])) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (!is_zero(m[r][c])) reduce(m[rank], m[r], c);
        }
        ++rank;
    }
    return rank;
}

}  // namespace

void set_rank_policy(RankPolicy policy) {
    std::lock_guard lock(policy_mutex);
    global_policy = std::move(policy);
}

RankPolicy rank_policy() {
    std::lock_guard lock(policy_mutex);
    return global_policy;
}

std::size_t rational_rank(RationalMatrix m) {
    return eliminate(
        m, [](const Rational& x) { return sgn(x) == 0; },
        [](const std::vector<Rational>& pivot, std::vector<Rational>& row, std::size_t c) {
            const Rational f = row[c] / pivot[c];
            for (std::size_t j = c; j < row.size(); ++j) row[j] -= f * pivot[j];
        });
}

std::size_t symbolic_rank(ScalarMatrix m) {
    return eliminate(
        m, [](const UScalar& x) { return x.is_zero(); },
        [](const std::vector<UScalar>& pivot, std::vector<UScalar>& row, std::size_t c) {
            const UScalar f = row[c] / pivot[c];
            for (std::size_t j = c; j < row.size(); ++j) {
                if (!pivot[j].is_zero()) row[j] -= f * pivot[j];
            }
        });
}

RankResult matrix_rank(const ScalarMatrix& m, const RankPolicy& policy) {
    if (m.empty() || m.front().empty()) return {0, "trivial"};
    if (policy.symbolic) return {symbolic_rank(m), "symbolic"};
    PointStream stream;
    std::vector<Rational> candidates = policy.points;
    std::vector<std::size_t> ranks;
    std::size_t used = 0;
    constexpr int kMaxAttempts = 16;
    for (int attempt = 0; attempt < kMaxAttempts && ranks.size() < 2; ++attempt) {
        const Rational u0 = used < candidates.size() ? candidates[used++] : stream.next();
        RationalMatrix r(m.size(), std::vector<Rational>(m.front().size()));
        try {
            for (std::size_t i = 0; i < m.size(); ++i) {
                for (std::size_t j = 0; j < m[i].size(); ++j) r[i][j] = m[i][j].specialize(u0);
            }
        } catch (const SpecializationError&) {
            continue;  // pole at this point; draw another
        }
        ranks.push_back(rational_rank(std::move(r)));
    }
    if (ranks.size() == 2 && ranks[0] == ranks[1]) return {ranks[0], "specialized"};
    return {symbolic_rank(m), "symbolic"};
}

}  // namespace qfree
