#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrelent/combinatorics.hpp"
#include "qrelent/entropy.hpp"
#include "qrelent/errors.hpp"
#include "qrelent/harness.hpp"
#include "qrelent/linalg.hpp"
#include "qrelent/scenario.hpp"
#include "qrelent/semiclassical.hpp"
#include "qrelent/suite.hpp"
#include "qrelent/tensor_space.hpp"

namespace py = pybind11;
using namespace qrelent;

namespace {

HermitianOperator herm(const Matrix& m) { return HermitianOperator(m); }

py::int_ to_python(const BigInt& v) {
  return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(v.str().c_str(), nullptr, 10)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-dimensional mean-field relative entropy toolkit";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  m.def("matrix_log", [](const Matrix& a) { return matrix_function(herm(a), MatrixFunction::Log).matrix(); },
        py::arg("a"));
  m.def("frechet_log", [](const Matrix& x, const Matrix& b) { return frechet_log(herm(x), herm(b)).matrix(); },
        py::arg("x"), py::arg("b"), "Derivative of log at X along B by divided differences.");
  m.def("frechet_log_quadrature",
        [](const Matrix& x, const Matrix& b, int nodes) {
          return frechet_log_quadrature(herm(x), herm(b), nodes).matrix();
        },
        py::arg("x"), py::arg("b"), py::arg("nodes") = 64);

  m.def("partial_trace",
        [](const Matrix& gamma, std::vector<int> keep, Index site_dim, int legs) {
          return partial_trace(gamma, std::move(keep), ManyBodySpace(site_dim, legs));
        },
        py::arg("gamma"), py::arg("keep"), py::arg("site_dim"), py::arg("legs"),
        "Trace out every leg not listed in `keep` (1-based).");

  m.def("von_neumann_entropy", [](const Matrix& g) { return von_neumann_entropy(herm(g)); }, py::arg("gamma"));
  m.def("relative_entropy", [](const Matrix& a, const Matrix& b) { return relative_entropy(herm(a), herm(b)).value; },
        py::arg("gamma"), py::arg("gamma_ref"), "S(gamma, gamma_ref); +inf on the kernel branch.");
  m.def("trace_distance", [](const Matrix& a, const Matrix& b) { return trace_distance(herm(a), herm(b)); },
        py::arg("a"), py::arg("b"));

  m.def("stirling2_assoc", [](int n, int k) { return to_python(stirling2_assoc(n, k)); }, py::arg("n"),
        py::arg("k"));
  m.def("count_patterns", [](int mm, int n) { return to_python(enumerate_I(mm, n).count); }, py::arg("m"),
        py::arg("n"), "Exact size of the pattern set I_{m,N}.");

  py::class_<BoundParams>(m, "BoundParams")
      .def(py::init([]() { return default_bound_params(); }))
      .def_readwrite("c0", &BoundParams::c0)
      .def_readwrite("c1", &BoundParams::c1)
      .def_readwrite("c2", &BoundParams::c2)
      .def_readwrite("t_final", &BoundParams::t_final)
      .def_readwrite("n", &BoundParams::n)
      .def_readwrite("k", &BoundParams::k)
      .def_readwrite("d", &BoundParams::d)
      .def_readwrite("phi_norm", &BoundParams::phi_norm)
      .def_readwrite("grad_phi_norm", &BoundParams::grad_phi_norm)
      .def_readwrite("lip_grad_phi", &BoundParams::lip_grad_phi);
  m.def("bound_f", &bound_f, py::arg("hbar"), py::arg("t"), py::arg("params"));
  m.def("bound_g", &bound_g, py::arg("hbar"), py::arg("t"), py::arg("params"));
  m.def("hbar_crossing", [](const BoundParams& p, double t) { return solve_hbar_crossing(p, t).hbar; },
        py::arg("params"), py::arg("t"));

  m.def("run_scenario",
        [](const std::string& text) {
          const Scenario s = parse_scenario(text);
          validate_scenario(s);
          const RunResult r = run_scenario(s);
          return py::make_tuple(r.exit_code, r.csv);
        },
        py::arg("text"), "Parse a YAML scenario and run it; returns (exit_code, csv).");

  m.def("run_suite",
        [](std::uint64_t seed, std::vector<std::string> tags) {
          SuiteOptions opt;
          opt.seed = seed;
          opt.tags = std::move(tags);
          opt.skip_determinism = true;
          const SuiteReport report = run_suite(opt);
          py::list out;
          for (const auto& c : report.criteria) {
            py::dict row;
            row["id"] = c.info.id;
            row["name"] = c.info.name;
            row["pass"] = c.pass;
            row["measured"] = c.measured;
            row["threshold"] = c.threshold;
            out.append(row);
          }
          return out;
        },
        py::arg("seed") = 1, py::arg("tags") = std::vector<std::string>{});
}
