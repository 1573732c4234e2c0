#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wigmap/cli.hpp"
#include "wigmap/error.hpp"
#include "wigmap/moments.hpp"
#include "wigmap/states.hpp"
#include "wigmap/transform.hpp"

namespace py = pybind11;
using namespace wigmap;

namespace {

py::array_t<double> to_array(const PhaseSpaceField& f) {
    py::array_t<double> out({f.grid().n_q(), f.grid().n_p()});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < f.grid().n_q(); ++i) {
        for (std::size_t j = 0; j < f.grid().n_p(); ++j) {
            view(i, j) = f.at(i, j);
        }
    }
    return out;
}

AnalyticWigner make_state(const std::string& state, double hbar, double beta, int n) {
    if (state == "thermal") {
        return AnalyticWigner(ThermalOscillator{beta, 1.0, 1.0, hbar});
    }
    if (state == "fock") {
        return AnalyticWigner(Fock{n, hbar});
    }
    throw std::invalid_argument("state must be 'thermal' or 'fock'");
}

}  // namespace

PYBIND11_MODULE(wigmap, m) {
    m.doc() = "Wigner functions of oscillator states and their transformation under phase gates";
    m.attr("__version__") = cli::kVersion;

    py::register_exception<NonConvergenceError>(m, "NonConvergenceError", PyExc_RuntimeError);
    py::register_exception<GridResolutionError>(m, "GridResolutionError", PyExc_RuntimeError);
    py::register_exception<CalibrationError>(m, "CalibrationError", PyExc_RuntimeError);

    m.def("scaled_fock_wigner", py::vectorize(scaled_fock_wigner), py::arg("n"), py::arg("r"));
    m.def("fock_wigner", py::vectorize(fock_wigner), py::arg("n"), py::arg("hbar"), py::arg("r"));
    m.def(
        "thermal_wigner",
        py::vectorize([](double beta, double hbar, double q, double p) { return thermal_wigner(beta, 1.0, 1.0, hbar, q, p); }),
        py::arg("beta"), py::arg("hbar"), py::arg("q"), py::arg("p"));
    m.def("cubic_kernel", py::vectorize(cubic_kernel), py::arg("u"), py::arg("alpha"), py::arg("hbar"));
    m.def("scaled_fock_zeros", &scaled_fock_zeros, py::arg("n"));

    m.def("f_recursion", &f_recursion, py::arg("n"), py::arg("ell"));
    m.def("f_closed", &f_closed, py::arg("n"), py::arg("ell"));
    m.def("f_quadrature", &f_quadrature, py::arg("n"), py::arg("ell"), py::arg("tol") = 1e-7);
    m.def("energy_moment", &energy_moment, py::arg("n"), py::arg("hbar"), py::arg("ell"));

    m.def(
        "peak_areas",
        [](int n) {
            const auto r = peak_areas(n);
            py::dict d;
            d["n"] = r.n;
            d["zeros"] = r.zeros;
            d["area_peak_only"] = r.area_peak_only;
            d["area_with_preceding_oscillation"] = r.area_with_preceding_oscillation;
            d["full_integral"] = r.full_integral;
            d["truncation_radius"] = r.truncation_radius;
            return d;
        },
        py::arg("n"));

    m.def(
        "discrepancy",
        [](const std::string& state, int degree, double alpha, double hbar, const std::string& grid, double beta, int n) {
            const auto psi = make_state(state, hbar, beta, n);
            const auto d = classical_quantum_discrepancy(psi, PhaseGate{degree, alpha, hbar}, cli::parse_grid_spec(grid));
            py::dict out;
            out["l_inf"] = d.l_inf;
            out["l1"] = d.l1;
            out["quantum"] = to_array(d.quantum.field);
            out["classical"] = to_array(d.classical);
            out["warnings"] = d.quantum.warnings;
            return out;
        },
        py::arg("state") = "thermal", py::arg("degree") = 3, py::arg("alpha") = 1.0, py::arg("hbar") = 0.3,
        py::arg("grid") = "-6:6:241,-6:6:241", py::arg("beta") = 1.0, py::arg("n") = 0);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line front end in process; returns (exit_code, stdout, stderr).");
}
