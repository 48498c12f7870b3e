#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace qfree {

using Json = nlohmann::ordered_json;

/// One failed instance of a check.
struct Failure {
    std::string basis;     // input state, or the coefficient position for series checks
    std::string modes;     // mode tuple, e.g. "k=1,l=-2"
    std::string residual;  // rendering of the nonzero difference
};

/// Pass/fail outcome of one check, with witnesses on failure.
class VerificationReport {
public:
    static constexpr std::size_t kMaxStoredFailures = 16;

    VerificationReport() = default;
    explicit VerificationReport(std::string relation) : relation_(std::move(relation)) {}

    [[nodiscard]] const std::string& relation() const { return relation_; }
    [[nodiscard]] bool passed() const { return failure_count_ == 0; }
    [[nodiscard]] std::size_t failure_count() const { return failure_count_; }
    [[nodiscard]] const std::vector<Failure>& failures() const { return failures_; }
    [[nodiscard]] std::size_t checks() const { return checks_; }

    /// Parameters are emitted in insertion order between "relation" and "status".
    Json& params() { return params_; }
    Json& details() { return details_; }
    void note(std::string text) { notes_.push_back(std::move(text)); }

    void count_check(std::size_t n = 1) { checks_ += n; }
    void fail(Failure f);
    /// Record one comparison; returns ok.
    bool expect(bool ok, const std::string& basis, const std::string& modes, const std::string& residual);
    /// Fold another report's outcome into this one, prefixing its relation to the modes.
    void absorb(const VerificationReport& other);
    /// Fold in a partial report of the same relation.
    void merge(const VerificationReport& other);

    [[nodiscard]] Json to_json() const;

private:
    std::string relation_;
    Json params_ = Json::object();
    Json details_ = Json::object();
    std::vector<std::string> notes_;
    std::vector<Failure> failures_;
    std::size_t failure_count_ = 0;
    std::size_t checks_ = 0;
};

/// JSON schema describing reports and series dumps.
Json report_schema();

}  // namespace qfree
