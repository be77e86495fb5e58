#include "selfield/magnetic.hpp"
#include "selfield/observables.hpp"
#include "selfield/record_io.hpp"
#include "selfield/shooting.hpp"
#include "selfield/spectrum.hpp"
#include "selfield/variational.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace selfield;

namespace {

AnsatzKind kind_of(const std::string& ansatz, bool conjugate) {
    AnsatzKind k;
    k.variant = ansatz_from_letter(ansatz.at(0));
    k.sign = conjugate ? SpinSign::minus : SpinSign::plus;
    return k;
}

py::dict record_dict(const SolutionRecord& rec) {
    py::dict d;
    d["ansatz"] = std::string(1, ansatz_letter(rec.ansatz.variant));
    d["nodes"] = rec.nodes;
    d["n"] = rec.n;
    d["beta0"] = rec.beta0;
    d["delta0"] = rec.delta0;
    d["gamma0"] = rec.gamma0;
    d["epsilon"] = rec.epsilon;
    d["q"] = rec.q;
    d["q_gauss"] = rec.q_gauss;
    d["r0"] = rec.r0;
    d["self_energy"] = rec.self_energy;
    d["w_binding"] = rec.w_binding;
    d["w_binding_alt"] = rec.w_binding_alt;
    d["identity_residual"] = rec.identity_residual;
    d["mu"] = rec.mu;
    d["j"] = rec.j;
    py::dict prof;
    prof["r"] = rec.k.r;
    prof["k"] = rec.k.value;
    prof["n"] = rec.nfun.value;
    prof["U"] = rec.u.value;
    prof["lambda"] = rec.lambda.value;
    d["profiles"] = prof;
    return d;
}

py::dict solve_py(const std::string& ansatz, int nodes, bool linear, double r_max,
                  double tol_charge, double delta_guess, bool conjugate) {
    SpectrumOptions opt;
    opt.linear = linear;
    opt.r_max = r_max;
    opt.tol_charge = tol_charge;
    opt.delta_guess = delta_guess;
    SolutionRecord rec = solve_state(kind_of(ansatz, conjugate), nodes, opt);
    rec.j = angular_momentum(rec);
    return record_dict(rec);
}

py::dict variational_py(const std::string& ansatz, int nodes, bool self_field) {
    VariationalResult res = optimize(kind_of(ansatz, false), nodes, self_field);
    py::dict d;
    d["w_var"] = res.w_var;
    d["scale"] = res.trial.scale;
    d["amplitude"] = res.trial.amplitude;
    d["self_energy"] = res.energy.self_energy;
    d["converged"] = res.converged;
    return d;
}

py::tuple rhs_py(const std::string& ansatz, double r, double k, double n, double u, double du) {
    SpinorState d = spinor_rhs(ansatz_from_letter(ansatz.at(0)), r, {k, n, u, du});
    return py::make_tuple(d.k, d.n, d.du);
}

py::dict series_start_py(const std::string& ansatz, double beta, double delta, double r) {
    SpinorState s = series_start(ansatz_from_letter(ansatz.at(0)), beta, delta, r);
    py::dict d;
    d["k"] = s.k;
    d["n"] = s.n;
    d["U"] = s.u;
    d["U_prime"] = s.du;
    return d;
}

double self_energy_py(const std::vector<double>& r, const std::vector<double>& rho) {
    RadialProfile src;
    src.r = r;
    src.value = rho;
    return field_self_energy(src);
}

} // namespace

PYBIND11_MODULE(_selfield, m) {
    m.doc() = "self-consistent hydrogen model: shooting and variational solvers";
    m.attr("__version__") = kVersion;

    m.def("laguerre", &laguerre, py::arg("N"), py::arg("a"), py::arg("x"),
          "generalized Laguerre polynomial L_N^(a)(x)");
    m.def("rhs", &rhs_py, py::arg("ansatz"), py::arg("r"), py::arg("k"), py::arg("n"),
          py::arg("U"), py::arg("U_prime"), "radial system right-hand side: (k', n', U'')");
    m.def("series_start", &series_start_py, py::arg("ansatz"), py::arg("beta"), py::arg("delta"),
          py::arg("r"), "series expansion of (k, n, U, U') near the origin");
    m.def("solve", &solve_py, py::arg("ansatz") = "A", py::arg("nodes") = 0,
          py::arg("linear") = false, py::arg("r_max") = 0.0, py::arg("tol_charge") = 1e-4,
          py::arg("delta_guess") = 0.0, py::arg("conjugate") = false,
          "full eigen-solve of one state; returns the record as a dict");
    m.def("variational", &variational_py, py::arg("ansatz") = "A", py::arg("nodes") = 0,
          py::arg("self_field") = true, "variational optimum over amplitude and scale");
    m.def("field_self_energy", &self_energy_py, py::arg("r"), py::arg("rho"),
          "(1/2) int (phi')^2 r^2 dr for the potential of a radial source");
    m.def("linear_epsilon",
          [](const std::string& a, int nodes) {
              return linear_epsilon(ansatz_from_letter(a.at(0)), nodes);
          },
          py::arg("ansatz"), py::arg("nodes"), "linear-problem eigenvalue 1/(4 n^2)");
}
