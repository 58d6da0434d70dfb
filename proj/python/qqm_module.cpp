// Python bindings. Grid functions cross the boundary as (n, 4) float arrays of
// x0..x3 components; operators as their (4n, 4n) real matrices.

#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"
#include "qqm/dynamics.hpp"
#include "qqm/errors.hpp"
#include "qqm/fourier.hpp"
#include "qqm/normal.hpp"
#include "qqm/spectral.hpp"

namespace py = pybind11;
using namespace qqm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

QFunction to_qfunction(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 4) throw DimensionError("expected an (n, 4) array");
  const Grid grid(static_cast<std::size_t>(a.shape(0)));
  QFunction f(grid);
  const auto r = a.unchecked<2>();
  for (py::ssize_t k = 0; k < a.shape(0); ++k) f[k] = {r(k, 0), r(k, 1), r(k, 2), r(k, 3)};
  return f;
}

Array to_array(const QFunction& f) {
  Array a({static_cast<py::ssize_t>(f.size()), py::ssize_t{4}});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t k = 0; k < f.size(); ++k) {
    w(k, 0) = f[k].x0;
    w(k, 1) = f[k].x1;
    w(k, 2) = f[k].x2;
    w(k, 3) = f[k].x3;
  }
  return a;
}

Quaternion to_quaternion(const std::array<double, 4>& q) { return {q[0], q[1], q[2], q[3]}; }
std::array<double, 4> from_quaternion(const Quaternion& q) { return {q.x0, q.x1, q.x2, q.x3}; }

BasisFamily make_family(const std::string& kind, std::size_t n_points, int N, double a, double b, int L) {
  const Grid g(n_points);
  switch (basis_kind_from_string(kind)) {
    case BasisKind::PhaseForm: return BasisFamily::phase_form(g, N, a, b);
    case BasisKind::ExpForm: return BasisFamily::exp_form(g, N, a);
    case BasisKind::TwoIndex: return BasisFamily::two_index(g, N, a);
    case BasisKind::ThreeIndex: return BasisFamily::three_index(g, L, N);
  }
  throw DomainError("unknown basis kind");
}

}  // namespace

PYBIND11_MODULE(qqm, m) {
  m.doc() = "Quaternionic quantum mechanics on a periodic grid";

  // Translators run newest first: the base class goes first so the specific ones win.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_ArithmeticError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ArithmeticError);
  py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_ArithmeticError);

  m.def("multiply", [](const std::array<double, 4>& p, const std::array<double, 4>& q) {
    return from_quaternion(to_quaternion(p) * to_quaternion(q));
  }, "Hamilton product of two quaternions given as (x0, x1, x2, x3).");
  m.def("unit_quaternion", [](double theta, double phi, double xi) {
    return from_quaternion(realize(UnitQuaternion{theta, phi, xi}));
  });
  m.def("commutator_norm", [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
    return commutator_norm({u[0], u[1], u[2]}, {v[0], v[1], v[2]});
  });
  m.def("angle_additivity_deviation", [](const std::array<double, 3>& u, const std::array<double, 3>& v) {
    return angle_additivity_deviation({u[0], u[1], u[2]}, {v[0], v[1], v[2]});
  });

  m.def("nodes", [](std::size_t n) { return Grid(n).nodes(); });
  m.def("inner", [](const Array& f, const Array& g) { return inner(to_qfunction(f), to_qfunction(g)); });
  m.def("norm", [](const Array& f) { return norm(to_qfunction(f)); });

  m.def("gram", [](const std::string& kind, std::size_t n_points, int N, double a, double b, int L) {
    return gram(make_family(kind, n_points, N, a, b, L));
  }, py::arg("kind"), py::arg("n_points"), py::arg("N"), py::arg("a") = 0.0, py::arg("b") = 0.0,
     py::arg("L") = 0, "Gram matrix of a basis family; a, b are (phi0, xi0) or theta0.");
  m.def("analyze", [](const Array& f, const std::string& kind, int N, double a, double b, int L) {
    const QFunction q = to_qfunction(f);
    return analyze(q, make_family(kind, q.size(), N, a, b, L)).coefficients;
  }, py::arg("f"), py::arg("kind"), py::arg("N"), py::arg("a") = 0.0, py::arg("b") = 0.0, py::arg("L") = 0);
  m.def("synthesize", [](const std::vector<double>& c, const std::string& kind, std::size_t n_points, int N,
                         double a, double b, int L) {
    return to_array(synthesize({make_family(kind, n_points, N, a, b, L), c}));
  }, py::arg("coefficients"), py::arg("kind"), py::arg("n_points"), py::arg("N"), py::arg("a") = 0.0,
     py::arg("b") = 0.0, py::arg("L") = 0);

  py::class_<HamiltonianSpec>(m, "HamiltonianSpec")
      .def(py::init([](std::size_t n) { return HamiltonianSpec(Grid(n)); }), py::arg("n_points"))
      .def_readwrite("mass", &HamiltonianSpec::mass)
      .def_readwrite("hbar", &HamiltonianSpec::hbar)
      .def_readwrite("alpha", &HamiltonianSpec::alpha)
      .def_readwrite("beta", &HamiltonianSpec::beta)
      .def_readwrite("V", &HamiltonianSpec::V)
      .def_readwrite("W", &HamiltonianSpec::W)
      .def("potential_is_real", &HamiltonianSpec::potential_is_real);

  m.def("hamiltonian_matrix", [](const HamiltonianSpec& s) { return hamiltonian(s).matrix(); });
  m.def("apply_hamiltonian", [](const HamiltonianSpec& s, const Array& psi) {
    return to_array(apply_hamiltonian(s, to_qfunction(psi)));
  });
  m.def("expectation_hamiltonian", [](const HamiltonianSpec& s, const Array& psi) {
    return expectation(hamiltonian(s), to_qfunction(psi));
  });

  m.def("spectrum", [](const Eigen::MatrixXd& t) {
    const Grid g(static_cast<std::size_t>(t.rows() / 4));
    const auto res = decompose(QOperator::from_matrix(g, t));
    return py::make_tuple(res.eigenvalues(), res.multiplicities(), (t - res.reconstruct()).norm());
  }, "Distinct eigenvalues, multiplicities and reconstruction error of a (4n, 4n) self-adjoint matrix.");

  m.def("evolve", [](const HamiltonianSpec& s, const Array& psi0, double t0, double t1, double dt) {
    const EvolutionResult r = evolve(EvolutionProblem(s, to_qfunction(psi0), t0, t1, dt));
    py::list states;
    for (const auto& q : r.states) states.append(to_array(q));
    py::dict report;
    report["total_norm"] = r.report.total_norm;
    report["integral_g"] = r.report.integral_g;
    report["norm_rate"] = r.report.norm_rate;
    report["max_residual"] = r.report.max_residual;
    report["max_nonreal"] = r.report.max_nonreal;
    return py::make_tuple(r.times, states, report);
  }, py::arg("spec"), py::arg("psi0"), py::arg("t0"), py::arg("t1"), py::arg("dt"));

  m.def("normal_conditions", [](const Eigen::MatrixXcd& n0, const Eigen::MatrixXcd& n1) {
    const NormalReport r = normal_conditions({n0, n1});
    return py::make_tuple(r.full_commutator, r.n0_commutator, r.mixed_commutator);
  });

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "Runs the command-line driver in-process; returns (exit_code, stdout, stderr).");
}
