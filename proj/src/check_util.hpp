#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qfree/fock.hpp"
#include "qfree/parallel.hpp"
#include "qfree/report.hpp"

namespace qfree::detail {

inline constexpr std::size_t kMaxResidualChars = 400;

inline std::string residual_str(const FockVector& v) {
    std::string s = v.str();
    if (s.size() > kMaxResidualChars) s = s.substr(0, kMaxResidualChars) + " ...";
    return s;
}

inline std::string modes_str(const std::vector<std::pair<std::string, int>>& modes) {
    std::string out;
    for (const auto& [name, value] : modes) out += (out.empty() ? "" : ",") + name + "=" + std::to_string(value);
    return out;
}

// Run one check per basis vector on the worker pool and merge in basis order.
inline VerificationReport per_vector(const std::string& relation, const std::vector<BasisMonomial>& basis,
                                     const std::function<void(VerificationReport&, const BasisMonomial&)>& check) {
    auto parts = parallel_map<VerificationReport>(basis.size(), [&](std::size_t i) {
        VerificationReport r(relation);
        check(r, basis[i]);
        return r;
    });
    VerificationReport out(relation);
    for (const auto& p : parts) out.merge(p);
    return out;
}

inline void expect_zero(VerificationReport& r, const FockVector& residual, const BasisMonomial& m,
                 const std::vector<std::pair<std::string, int>>& modes) {
    r.expect(residual.is_zero(), m.str(), modes_str(modes), residual_str(residual));
}

}  // namespace qfree::detail
