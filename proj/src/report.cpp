#include "qfree/report.hpp"

namespace qfree {

void VerificationReport::fail(Failure f) {
    ++failure_count_;
    if (failures_.size() < kMaxStoredFailures) failures_.push_back(std::move(f));
}

bool VerificationReport::expect(bool ok, const std::string& basis, const std::string& modes,
                                const std::string& residual) {
    ++checks_;
    if (!ok) fail(Failure{basis, modes, residual});
    return ok;
}

void VerificationReport::absorb(const VerificationReport& other) {
    checks_ += other.checks_;
    for (const auto& f : other.failures_) {
        if (failures_.size() < kMaxStoredFailures) {
            failures_.push_back(Failure{f.basis, other.relation_ + ": " + f.modes, f.residual});
        }
    }
    failure_count_ += other.failure_count_;
}

void VerificationReport::merge(const VerificationReport& other) {
    checks_ += other.checks_;
    for (const auto& f : other.failures_) {
        if (failures_.size() < kMaxStoredFailures) failures_.push_back(f);
    }
    failure_count_ += other.failure_count_;
    for (const auto& n : other.notes_) notes_.push_back(n);
}

Json VerificationReport::to_json() const {
    Json j;
    j["relation"] = relation_;
    for (const auto& [k, v] : params_.items()) j[k] = v;
    j["status"] = passed() ? "pass" : "fail";
    j["checks"] = checks_;
    Json fs = Json::array();
    for (const auto& f : failures_) {
        fs.push_back(Json{{"basis", f.basis}, {"modes", f.modes}, {"residual", f.residual}});
    }
    j["failures"] = fs;
    if (failure_count_ > failures_.size()) j["failures_truncated"] = failure_count_ - failures_.size();
    if (!details_.empty()) j["details"] = details_;
    if (!notes_.empty()) j["notes"] = notes_;
    return j;
}

Json report_schema() {
    Json failure = {
        {"type", "object"},
        {"required", {"basis", "modes", "residual"}},
        {"properties",
         {{"basis", {{"type", "string"}, {"description", "input basis monomial or coefficient position"}}},
          {"modes", {{"type", "string"}, {"description", "mode tuple of the failing instance"}}},
          {"residual", {{"type", "string"}, {"description", "rendering of the nonzero residual vector"}}}}},
    };
    Json report = {
        {"type", "object"},
        {"required", {"relation", "status", "checks", "failures"}},
        {"properties",
         {{"relation", {{"type", "string"}}},
          {"sector", {{"type", "array"}, {"items", {{"type", "number"}}}}},
          {"degree", {{"type", "integer"}}},
          {"window", {{"type", "integer"}}},
          {"order", {{"type", "integer"}}},
          {"pair", {{"type", "string"}}},
          {"type", {{"type", "string"}}},
          {"status", {{"enum", {"pass", "fail"}}}},
          {"checks", {{"type", "integer"}, {"minimum", 0}}},
          {"failures", {{"type", "array"}, {"items", {{"$ref", "#/$defs/failure"}}}}},
          {"failures_truncated", {{"type", "integer"}}},
          {"details", {{"type", "object"}}},
          {"notes", {{"type", "array"}, {"items", {{"type", "string"}}}}}}},
    };
    Json series = {
        {"type", "object"},
        {"required", {"vars", "order", "terms"}},
        {"properties",
         {{"vars", {{"type", "array"}, {"items", {{"type", "string"}}}}},
          {"order", {{"type", "integer"}}},
          {"window", {{"type", "array"}, {"items", {{"type", "integer"}}}}},
          {"terms",
           {{"type", "array"},
            {"items",
             {{"type", "object"},
              {"required", {"e", "c"}},
              {"properties",
               {{"e", {{"type", "array"}, {"items", {{"type", "integer"}}}}}, {"c", {{"type", "string"}}}}}}}}}}},
    };
    Json schema;
    schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
    schema["title"] = "qfree report stream";
    schema["version"] = "1";
    schema["$defs"] = Json{{"failure", failure}, {"report", report}, {"series", series}};
    schema["oneOf"] = Json::array({Json{{"$ref", "#/$defs/report"}}, Json{{"$ref", "#/$defs/series"}}});
    return schema;
}

}  // namespace qfree
