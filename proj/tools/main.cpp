#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <regex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfree/currents.hpp"
#include "qfree/linalg.hpp"
#include "qfree/parallel.hpp"
#include "qfree/qseries.hpp"
#include "qfree/repcheck.hpp"
#include "qfree/vertexops.hpp"

using namespace qfree;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::vector<std::string> relations;
    std::vector<std::string> sectors;
    std::vector<std::string> pairs;
    std::vector<std::string> types;
    std::vector<int> families;
    std::vector<int> formulas;
    std::vector<int> ls;
    std::string which;
    int degree = 3;
    int window = 2;
    int order = 8;
    std::optional<int> two_point_order;
    std::vector<std::string> specialize;
    bool symbolic = false;
    bool no_oracle = false;
    std::string out;
    int workers = 0;
};

// Collects reports as JSON lines; the exit code follows the worst outcome.
class Sink {
public:
    explicit Sink(std::ostream& os) : os_(os) {}
    void emit(const VerificationReport& r) {
        os_ << r.to_json().dump() << '\n';
        os_.flush();
        ++total_;
        if (!r.passed()) ++failed_;
    }
    [[nodiscard]] int exit_code() const { return failed_ == 0 ? kExitPass : kExitFail; }
    [[nodiscard]] int total() const { return total_; }
    [[nodiscard]] int failed() const { return failed_; }

private:
    std::ostream& os_;
    int total_ = 0;
    int failed_ = 0;
};

Rational parse_point(const std::string& text) {
    static const std::regex form(R"(\s*u\s*=\s*(-?\d+)(?:\s*/\s*(\d+))?\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, form)) throw UsageError("--specialize expects u=p/q, got '" + text + "'");
    Rational r(m[1].str() + (m[2].matched ? "/" + m[2].str() : ""));
    if (m[2].matched && m[2].str() == "0") throw UsageError("--specialize: zero denominator in '" + text + "'");
    r.canonicalize();
    if (r == 0) throw UsageError("--specialize: u = 0 is not allowed");
    return r;
}

void apply_config(const RunConfig& c) {
    if (c.degree < 0) throw UsageError("--degree must be nonnegative");
    if (c.window < 0) throw UsageError("--window must be nonnegative");
    if (c.order < 1) throw UsageError("--order must be positive");
    if (c.two_point_order && *c.two_point_order < 0) throw UsageError("--order must be nonnegative");
    if (c.workers < 0) throw UsageError("--workers must be positive");
    if (c.workers > 0) set_worker_count(c.workers);
    RankPolicy policy = rank_policy();
    if (!c.specialize.empty()) {
        std::vector<Rational> points;
        std::set<Rational> seen;
        for (const auto& s : c.specialize) {
            Rational p = parse_point(s);
            if (!seen.insert(p).second) throw UsageError("--specialize: duplicate point " + p.get_str());
            points.push_back(p);
        }
        policy.points = std::move(points);
    }
    policy.symbolic = c.symbolic;
    set_rank_policy(policy);
}

std::vector<Sector> selected_sectors(const RunConfig& c) {
    if (c.sectors.empty()) return standard_sectors();
    std::vector<Sector> out;
    for (const auto& s : c.sectors) out.push_back(Sector::parse(s));
    return out;
}

std::vector<VertexPair> selected_pairs(const RunConfig& c) {
    std::vector<std::string> types = c.types.empty() ? std::vector<std::string>{"I", "II"} : c.types;
    std::vector<VertexPair> out;
    for (const auto& t : types) {
        if (c.pairs.empty()) {
            const VertexType type = VertexPair::parse(t, "1->2").type;
            for (const auto& p : all_vertex_pairs()) {
                if (p.type == type) out.push_back(p);
            }
        } else {
            for (const auto& p : c.pairs) out.push_back(VertexPair::parse(t, p));
        }
    }
    return out;
}

std::vector<int> selected_families(const RunConfig& c) {
    return c.families.empty() ? std::vector<int>{1, 2, 3, 4} : c.families;
}

void run_relations(const RunConfig& c, Sink& sink) {
    static const std::vector<std::string> all = {"R1", "R2", "R3", "R4", "R5", "R6", "R7"};
    const auto& ids = c.relations.empty() ? all : c.relations;
    for (const Sector& s : selected_sectors(c)) {
        for (const auto& id : ids) sink.emit(check_drinfeld(id, s, c.degree, c.window));
    }
}

void run_builders(const RunConfig& c, Sink& sink) { sink.emit(check_xplus_builders(c.degree, c.window)); }

void run_screening(const RunConfig& c, Sink& sink) { sink.emit(check_screening(c.window, c.degree)); }

void run_clifford(const RunConfig& c, Sink& sink) { sink.emit(clifford_check(c.degree)); }

void run_kernel(const RunConfig& c, Sink& sink) {
    for (int i : selected_families(c)) {
        KernelCharacter kc = kernel_character(i, c.degree, c.window);
        kc.report.details()["series"] = kc.series.to_json();
        sink.emit(kc.report);
    }
}

void run_hw(const RunConfig& c, Sink& sink) {
    for (int i : selected_families(c)) sink.emit(hw_verify(i));
}

void run_series(const RunConfig& c, Sink& sink) {
    const std::string which = c.which.empty() ? "all" : c.which;
    if (which != "all" && which != "star" && which != "S" && which != "jacobi") {
        throw UsageError("--which must be star, S, jacobi or all");
    }
    if (which == "all" || which == "star") sink.emit(check_star_identity(c.order));
    if (which == "all" || which == "S") {
        const std::vector<int> ls = c.ls.empty() ? std::vector<int>{-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5} : c.ls;
        for (int l : ls) sink.emit(check_S(l, c.order));
    }
    if (which == "all" || which == "jacobi") {
        const std::vector<int> ls = c.ls.empty() ? std::vector<int>{0, 1, 2} : c.ls;
        for (int l : ls) sink.emit(check_jacobi_triple(l, c.order));
    }
}

void run_ope(const RunConfig& c, Sink& sink) {
    const std::vector<int> ids = c.formulas.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8} : c.formulas;
    for (int id : ids) sink.emit(check_ope_formula(id, c.order));
}

void run_intertwining(const RunConfig& c, Sink& sink) {
    const auto& ids = c.relations.empty() ? intertwining_conditions() : c.relations;
    for (const VertexPair& p : selected_pairs(c)) {
        if (c.relations.empty()) sink.emit(normalization_check(p));
        for (const auto& id : ids) sink.emit(check_intertwining(p, id, c.degree, c.window));
        if (c.relations.empty()) sink.emit(check_screening_anticommute(p, c.degree));
    }
}

void run_two_point(const RunConfig& c, Sink& sink) {
    const int order = c.two_point_order.value_or(3);
    std::vector<std::string> types = c.types.empty() ? std::vector<std::string>{"I"} : c.types;
    for (const auto& t : types) {
        const VertexType type = VertexPair::parse(t, "1->2").type;
        if (type == VertexType::II && !c.no_oracle) {
            throw UsageError("type II two-point functions have no reference formula; pass --no-oracle");
        }
        TwoPoint tp = two_point(order, type);
        Json comps = Json::object();
        const char* names[2] = {"+", "-"};
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) comps[std::string(names[a]) + names[b]] = tp.components[a][b].to_json();
        }
        tp.report.details()["components"] = comps;
        sink.emit(tp.report);
    }
}

void run_all(const RunConfig& c, Sink& sink) {
    RunConfig base = c;
    base.relations.clear();
    run_relations(base, sink);
    run_builders(base, sink);
    run_screening(base, sink);
    run_clifford(base, sink);
    run_kernel(base, sink);
    run_hw(base, sink);
    run_series(base, sink);
    run_ope(base, sink);
    run_intertwining(base, sink);
    run_two_point(base, sink);
}

struct Command {
    std::string name;
    std::string help;
    std::function<void(const RunConfig&, Sink&)> run;
    std::vector<std::string> flags;
};

void add_flags(CLI::App* sub, RunConfig& c, const std::vector<std::string>& flags) {
    auto has = [&](const std::string& f) { return std::find(flags.begin(), flags.end(), f) != flags.end(); };
    if (has("relation")) sub->add_option("--relation", c.relations, "Relation ids (repeatable)");
    if (has("sector")) sub->add_option("--sector", c.sectors, "Sector l1,l2 with l1 in Z/2 (repeatable)");
    if (has("pair")) sub->add_option("--pair", c.pairs, "Vertex pair 1->2, 2->1, 3->4 or 4->3 (repeatable)");
    if (has("type")) sub->add_option("--type", c.types, "Vertex operator type I or II (repeatable)");
    if (has("family")) sub->add_option("--family", c.families, "Family index 1..4 (repeatable)")->check(CLI::Range(1, 4));
    if (has("formula")) sub->add_option("--formula", c.formulas, "Formula id 1..8 (repeatable)")->check(CLI::Range(1, 8));
    if (has("which")) sub->add_option("--which", c.which, "star, S, jacobi or all");
    if (has("l")) sub->add_option("--l", c.ls, "Index l (repeatable)");
    if (has("degree")) sub->add_option("--degree", c.degree, "Oscillator degree bound")->capture_default_str();
    if (has("window")) sub->add_option("--window", c.window, "Mode window |k|")->capture_default_str();
    if (has("order")) sub->add_option("--order", c.order, "Series order")->capture_default_str();
    if (has("tp-order")) sub->add_option("--order", c.two_point_order, "Two-point z-order (default 3)");
    if (has("no-oracle")) sub->add_flag("--no-oracle", c.no_oracle, "Allow type II without a reference formula");
    if (has("two-point")) sub->add_option("--two-point-order", c.two_point_order, "Two-point z-order (default 3)");
    if (has("rank")) {
        sub->add_option("--specialize", c.specialize, "Specialization point u=p/q for ranks (repeatable)");
        sub->add_flag("--symbolic", c.symbolic, "Exact elimination over Q(u) for ranks");
    }
    sub->add_option("--out", c.out, "Write JSON lines to FILE");
    sub->add_option("--workers", c.workers, "Worker threads (default QFREE_WORKERS or hardware)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks for the free-field realization and its vertex operators"};
    app.require_subcommand(1);
    RunConfig config;

    const std::vector<Command> commands = {
        {"verify-relations", "Drinfeld relations R1-R7 on Fock sectors", run_relations,
         {"relation", "sector", "degree", "window"}},
        {"verify-builders", "Agreement of the two X+ builders", run_builders, {"degree", "window"}},
        {"verify-screening", "Screening charge commutes with the algebra (window = max |k|)", run_screening,
         {"degree", "window"}},
        {"clifford", "Ghost zero-mode algebra", run_clifford, {"degree"}},
        {"kernel-character", "Kernel dimensions of Q- against the character products", run_kernel,
         {"family", "degree", "window", "rank"}},
        {"hw-check", "Highest weight vectors", run_hw, {"family"}},
        {"series-identity", "The star identity, S_l and the Jacobi triple product step", run_series,
         {"which", "l", "order"}},
        {"ope", "Operator product formulas", run_ope, {"formula", "order"}},
        {"intertwining", "Vertex operator conditions, normalization and anticommutation", run_intertwining,
         {"relation", "pair", "type", "degree", "window"}},
        {"two-point", "Two-point function of the type I operators", run_two_point, {"type", "tp-order", "no-oracle"}},
        {"all", "Every check at the given bounds", run_all,
         {"degree", "window", "order", "two-point", "no-oracle", "rank"}},
    };

    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& cmd : commands) subs.emplace_back(app.add_subcommand(cmd.name, cmd.help), &cmd);
    for (auto& [sub, cmd] : subs) add_flags(sub, config, cmd->flags);
    CLI::App* schema = app.add_subcommand("schema", "Print the JSON schema of reports and series");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    if (schema->parsed()) {
        std::cout << report_schema().dump(2) << '\n';
        return kExitPass;
    }

    std::ofstream file;
    if (!config.out.empty()) {
        file.open(config.out);
        if (!file) {
            std::cerr << "error: cannot open " << config.out << '\n';
            return kExitUsage;
        }
    }
    Sink sink(config.out.empty() ? std::cout : file);

    try {
        apply_config(config);
        for (auto& [sub, cmd] : subs) {
            if (sub->parsed()) cmd->run(config, sink);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    std::cerr << sink.total() - sink.failed() << "/" << sink.total() << " checks passed\n";
    return sink.exit_code();
}
