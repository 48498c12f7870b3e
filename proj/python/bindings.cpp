#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qfree/currents.hpp"
#include "qfree/fock.hpp"
#include "qfree/parallel.hpp"
#include "qfree/qseries.hpp"
#include "qfree/repcheck.hpp"
#include "qfree/uscalar.hpp"
#include "qfree/vertexops.hpp"

namespace py = pybind11;
using namespace qfree;

namespace {

// Reports cross the boundary as JSON text; the package decodes them.
std::string dump(const VerificationReport& r) { return r.to_json().dump(); }

std::string apply_current(const std::string& expr, int n4, const std::string& state, int trunc) {
    const FockVector v(BasisMonomial::parse(state));
    return apply_mode(CurrentExpr::parse(expr), n4, v, trunc < 0 ? CompiledExpr::kNoTruncation : trunc).str();
}

std::string specialize(const std::string& scalar, const std::string& u0) {
    return UScalar::parse(scalar).specialize(Rational(u0)).get_str();
}

std::string two_point_json(int order, const std::string& type) {
    TwoPoint tp = two_point(order, VertexPair::parse(type, "1->2").type);
    Json comps = Json::object();
    const char* names[2] = {"+", "-"};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) comps[std::string(names[a]) + names[b]] = tp.components[a][b].to_json();
    }
    tp.report.details()["components"] = comps;
    return dump(tp.report);
}

}  // namespace

PYBIND11_MODULE(_qfree, m) {
    m.doc() = "Exact checks for a two-boson free-field realization and its vertex operators";

    m.def("scalar_str", [](const std::string& s) { return UScalar::parse(s).str(); }, py::arg("text"),
          "Canonical rendering of an element of Q(u).");
    m.def("scalar_specialize", &specialize, py::arg("text"), py::arg("u"));
    m.def("qint", [](int n) { return qint(n).str(); }, py::arg("n"), "The bracket [n] rendered in u.");
    m.def("apply_current", &apply_current, py::arg("expr"), py::arg("n4"), py::arg("state"), py::arg("trunc") = -1,
          "Coefficient of z^(n4/4) of a current expression applied to a basis state.");

    m.def("check_drinfeld", [](const std::string& id, const std::string& sector, int degree, int window) {
              return dump(check_drinfeld(id, Sector::parse(sector), degree, window));
          }, py::arg("relation"), py::arg("sector"), py::arg("degree"), py::arg("window"),
          py::call_guard<py::gil_scoped_release>());
    m.def("check_xplus_builders", [](int degree, int window) { return dump(check_xplus_builders(degree, window)); },
          py::arg("degree"), py::arg("window"), py::call_guard<py::gil_scoped_release>());
    m.def("check_screening", [](int kmax, int degree) { return dump(check_screening(kmax, degree)); },
          py::arg("kmax"), py::arg("degree"), py::call_guard<py::gil_scoped_release>());
    m.def("clifford_check", [](int degree) { return dump(clifford_check(degree)); }, py::arg("degree"));
    m.def("kernel_dimension", [](const std::string& sector, int degree) {
              return kernel_dimension(Sector::parse(sector), degree);
          }, py::arg("sector"), py::arg("degree"));
    m.def("kernel_character", [](int family, int degree, int window) {
              KernelCharacter kc = kernel_character(family, degree, window);
              kc.report.details()["series"] = kc.series.to_json();
              return dump(kc.report);
          }, py::arg("family"), py::arg("degree"), py::arg("window"), py::call_guard<py::gil_scoped_release>());
    m.def("hw_verify", [](int family) { return dump(hw_verify(family)); }, py::arg("family"));

    m.def("check_star_identity", [](int order) { return dump(check_star_identity(order)); }, py::arg("order"));
    m.def("check_S", [](int l, int order) { return dump(check_S(l, order)); }, py::arg("l"), py::arg("order"));
    m.def("check_jacobi_triple", [](int l, int order) { return dump(check_jacobi_triple(l, order)); }, py::arg("l"),
          py::arg("order"));
    m.def("check_ope_formula", [](int id, int order) { return dump(check_ope_formula(id, order)); },
          py::arg("formula"), py::arg("order"));

    m.def("intertwining_conditions", &intertwining_conditions);
    m.def("check_intertwining", [](const std::string& type, const std::string& pair, const std::string& which,
                                   int degree, int window) {
              return dump(check_intertwining(VertexPair::parse(type, pair), which, degree, window));
          }, py::arg("type"), py::arg("pair"), py::arg("condition"), py::arg("degree"), py::arg("window"),
          py::call_guard<py::gil_scoped_release>());
    m.def("check_screening_anticommute", [](const std::string& type, const std::string& pair, int degree) {
              return dump(check_screening_anticommute(VertexPair::parse(type, pair), degree));
          }, py::arg("type"), py::arg("pair"), py::arg("degree"), py::call_guard<py::gil_scoped_release>());
    m.def("normalization_check", [](const std::string& type, const std::string& pair) {
              return dump(normalization_check(VertexPair::parse(type, pair)));
          }, py::arg("type"), py::arg("pair"));
    m.def("two_point", &two_point_json, py::arg("order"), py::arg("type") = "I",
          py::call_guard<py::gil_scoped_release>());
    m.def("two_point_product", [](int order) {
              std::vector<std::string> out;
              const UScalarSeries s = two_point_product(order);
              for (int j = 0; j <= order; ++j) out.push_back(s.coeff(j).str());
              return out;
          }, py::arg("order"));

    m.def("report_schema", [] { return report_schema().dump(); });
    m.def("set_workers", &set_worker_count, py::arg("n"));
    m.def("workers", &worker_count);
}
