// Acceptance runner: one line per criterion, exit status 0 only when all pass.
//
//   AC<k> PASS|FAIL <name>: <measured quantities> (<limits>)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "qqm/dynamics.hpp"
#include "qqm/fourier.hpp"
#include "qqm/normal.hpp"
#include "qqm/spectral.hpp"
#include "random.hpp"

using namespace qqm;
using qqm::testing::normalized;
using qqm::testing::Rng;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  // Records value against an upper (value < limit) or lower (value > limit) bound.
  void bound(const std::string& what, double value, double limit, bool upper = true) {
    const bool ok = upper ? value < limit : value > limit;
    pass = pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3e %s %.0e", detail.empty() ? "" : ", ", what.c_str(), value,
                  upper ? "<" : ">", limit);
    detail += buf;
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : ", ") + text; }
  void require(const std::string& what, bool ok) {
    pass = pass && ok;
    note(what + (ok ? "=yes" : "=NO"));
  }
};

double gram_deviation(const Eigen::MatrixXd& g, const Eigen::MatrixXd& want) {
  return (g - want).cwiseAbs().maxCoeff();
}

ParamFunction random_param(Rng& rng, const Grid& g) { return ParamFunction::samples(rng.real_samples(g, 3)); }

Eigen::VectorXcd as_complex(const QFunction& f) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t k = 0; k < f.size(); ++k) v(static_cast<Eigen::Index>(k)) = {f[k].x0, f[k].x1};
  return v;
}

double nonreal(const Quaternion& q) { return std::fmax(std::fmax(std::fabs(q.x1), std::fabs(q.x2)), std::fabs(q.x3)); }

Verdict ac1_orthogonality() {
  Rng rng(1001);
  const Grid g(256);
  const Eigen::MatrixXd want = kTwoPi * Eigen::MatrixXd::Identity(33, 33);
  double constant = 0.0, functions = 0.0;
  for (int t = 0; t < 5; ++t) {
    constant = std::fmax(constant, gram_deviation(gram(BasisFamily::phase_form(g, 16, rng.angle(), rng.angle())), want));
    constant = std::fmax(constant, gram_deviation(gram(BasisFamily::exp_form(g, 16, rng.angle())), want));
    functions = std::fmax(functions, gram_deviation(gram(BasisFamily::phase_form(g, 16, random_param(rng, g),
                                                                                 random_param(rng, g))),
                                                    want));
    functions = std::fmax(functions, gram_deviation(gram(BasisFamily::exp_form(g, 16, random_param(rng, g))), want));
  }
  Verdict v;
  v.bound("const_params", constant, 1e-10);
  v.bound("function_params", functions, 1e-10);
  return v;
}

Verdict ac2_multi_index() {
  Rng rng(1002);
  Verdict v;
  // Gram of the full square against 2π(cos²θ0 δmm' + sin²θ0 δnn').
  {
    const Grid g(256);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const double theta = rng.angle();
      const auto fam = BasisFamily::two_index(g, 6, theta);
      const Eigen::MatrixXd gm = gram(fam);
      const double c2 = std::pow(std::cos(theta), 2), s2 = std::pow(std::sin(theta), 2);
      for (std::size_t a = 0; a < fam.size(); ++a) {
        for (std::size_t b = 0; b < fam.size(); ++b) {
          const auto& p = fam.indices()[a];
          const auto& q = fam.indices()[b];
          const double want = kTwoPi * (c2 * (p.m == q.m) + s2 * (p.n == q.n));
          worst = std::fmax(worst, std::fabs(gm(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - want));
        }
      }
    }
    v.bound("gram_formula", worst, 1e-10);
  }
  // Planted recovery on identifiable (acyclic) index sets of every size 4..81.
  {
    const Grid g(128);
    double worst = 0.0;
    for (std::size_t size = 4; size <= 81; ++size) {
      const auto fam = BasisFamily::two_index(g, 20, rng.uniform(0.2, 1.3)).with_indices(staircase_indices(20, size));
      std::vector<double> a(size);
      for (double& x : a) x = rng.uniform();
      const auto e = analyze(synthesize({fam, a}), fam);
      for (std::size_t k = 0; k < size; ++k) worst = std::fmax(worst, std::fabs(e.coefficients[k] - a[k]));
    }
    v.bound("planted_recovery_sizes_4_81", worst, 1e-8);
  }
  return v;
}

Verdict ac3_roundtrip() {
  Rng rng(1003);
  const Grid g(128);
  double worst = 0.0;
  const std::vector<BasisFamily> families{
      BasisFamily::phase_form(g, 12, rng.angle(), rng.angle()),
      BasisFamily::exp_form(g, 12, random_param(rng, g)),
      BasisFamily::two_index(g, 8, 0.7).with_indices(staircase_indices(8, 30)),
  };
  for (const auto& fam : families) {
    for (int t = 0; t < 5; ++t) {
      std::vector<double> a(fam.size());
      for (double& x : a) x = rng.uniform();
      const QFunction f = synthesize({fam, a});
      worst = std::fmax(worst, max_distance(synthesize(analyze(f, fam)), f));
    }
  }
  // i cos x is orthogonal to every cos nx + sin nx j.
  const QFunction icos = QFunction::sample(g, [](double x) { return Quaternion{0, std::cos(x), 0, 0}; });
  const double outside = completeness_residual(icos, BasisFamily::phase_form(g, 12));
  const auto full = reference_full_basis(g, 12);
  double reference = completeness_residual(icos, full);
  for (int t = 0; t < 5; ++t) reference = std::fmax(reference, completeness_residual(rng.band_limited(g, 12), full));
  Verdict v;
  v.bound("synthesize_analyze", worst, 1e-9);
  v.bound("out_of_span_residual", outside, 0.5, false);
  v.bound("reference_basis_residual", reference, 1e-9);
  return v;
}

Verdict ac4_realness() {
  Rng rng(1004);
  const Grid g(32);
  double dens = 0.0, expect = 0.0, rho_min = INFINITY;
  for (int t = 0; t < 100; ++t) {
    HamiltonianSpec s(g);
    s.mass = rng.uniform(0.5, 2.0);
    s.hbar = rng.uniform(0.5, 1.5);
    s.alpha = rng.real_samples(g, 2, 0.5);
    s.beta = rng.complex_samples(g, 2, 0.5);
    s.V = rng.complex_samples(g, 2);
    s.W = rng.complex_samples(g, 2);
    const QFunction psi = normalized(rng.band_limited(g, 5));
    const Densities d = densities(s, psi);
    dens = std::fmax(dens, d.max_nonreal);
    for (double r : d.rho) rho_min = std::fmin(rho_min, r);
    // Expectation integrand (OΨ)Ψ̄ + Ψ conj(OΨ) for the Hamiltonian and a random
    // sandwich operator; its real part is the expectation density.
    for (const QOperator& op : {hamiltonian(s), superop(rng.band_limited(g, 2), rng.quaternion())}) {
      const auto parts = expectation_integrands(op, psi);
      for (std::size_t k = 0; k < g.size(); ++k) expect = std::fmax(expect, nonreal(parts.first[k] + parts.second[k]));
    }
  }
  Verdict v;
  v.bound("rho_J_g_nonreal", dens, 1e-12);
  v.bound("expectation_nonreal", expect, 1e-12);
  v.require("rho_nonnegative", rho_min >= 0.0);
  return v;
}

Verdict ac5_conservation() {
  Rng rng(1005);
  const Grid g(64);
  HamiltonianSpec s(g);
  s.alpha = rng.real_samples(g, 2, 0.3);
  s.beta = rng.complex_samples(g, 2, 0.3);
  const auto re = rng.real_samples(g, 2);
  for (std::size_t k = 0; k < g.size(); ++k) s.V[k] = re[k];
  const QFunction psi0 = normalized(rng.band_limited(g, 4));

  const EvolutionResult real_run = evolve(EvolutionProblem(s, psi0, 0.0, 1.0, 1e-3));
  double drift = 0.0;
  for (double n : real_run.report.total_norm) drift = std::fmax(drift, std::fabs(n - real_run.report.total_norm.front()));

  HamiltonianSpec w = s;
  w.W = rng.complex_samples(g, 2, 0.5);
  const EvolutionResult w_run = evolve(EvolutionProblem(w, psi0, 0.0, 1.0, 1e-3));
  double scale = 0.0, mismatch = 0.0;
  for (std::size_t n = 0; n < w_run.times.size(); ++n) {
    scale = std::fmax(scale, std::fabs(w_run.report.integral_g[n]));
    mismatch = std::fmax(mismatch, std::fabs(w_run.report.norm_rate[n] - w_run.report.integral_g[n]));
  }

  // Free Gaussian packet: residual limited by the centered time differences.
  HamiltonianSpec free(g);
  const QFunction packet = normalized(QFunction::sample(g, [](double x) {
    const double e = std::exp(-2.0 * (x - M_PI) * (x - M_PI));
    return Quaternion{e * std::cos(2 * x), e * std::sin(2 * x), 0.5 * e, 0};
  }));
  std::vector<double> res;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    const EvolutionResult r = evolve(EvolutionProblem(free, packet, 0.0, 0.2, dt));
    res.push_back(*std::max_element(r.report.max_residual.begin(), r.report.max_residual.end()));
  }
  double order_dev = 0.0;
  std::string orders;
  for (std::size_t a = 0; a + 1 < res.size(); ++a) {
    const double p = std::log2(res[a] / res[a + 1]);
    order_dev = std::fmax(order_dev, std::fabs(p - 2.0));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.3f", orders.empty() ? "" : "/", p);
    orders += buf;
  }
  Verdict v;
  v.bound("real_U_norm_drift_1000_steps", drift, 1e-8);
  v.bound("W_rate_vs_source_relative", mismatch / scale, 1e-6);
  v.note("observed_orders=" + orders);
  v.bound("order_deviation_from_2", order_dev, 0.3);
  return v;
}

Verdict ac6_complex_reduction() {
  Rng rng(1006);
  const Grid g(32);
  HamiltonianSpec s(g);
  s.mass = 0.9;
  s.hbar = 1.1;
  s.alpha = rng.real_samples(g, 2, 0.5);
  s.V = rng.complex_samples(g, 2, 0.5);
  const QFunction psi0 = normalized(rng.band_limited_complex(g, 4));
  const EvolutionResult r = evolve(EvolutionProblem(s, psi0, 0.0, 1.0, 1e-3));
  const Eigen::MatrixXcd h = qqm::testing::complex_hamiltonian(32, s.mass, s.hbar, s.alpha, s.V);
  double l2 = 0.0, leak = 0.0;
  for (std::size_t n = 0; n < r.times.size(); ++n) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      leak = std::fmax(leak, std::fmax(std::fabs(r.states[n][k].x2), std::fabs(r.states[n][k].x3)));
    }
    if (n % 50 != 0) continue;
    const Eigen::VectorXcd want = qqm::testing::complex_evolve(h, as_complex(psi0), r.times[n], s.hbar);
    l2 = std::fmax(l2, std::sqrt(g.spacing()) * (as_complex(r.states[n]) - want).norm());
  }
  Verdict v;
  v.bound("L2_vs_complex_reference", l2, 1e-7);
  v.bound("jk_components", leak, 1e-10);
  return v;
}

struct ResolutionErrors {
  double reconstruction = 0.0;
  double projections = 0.0;
  double identity = 0.0;
};

ResolutionErrors resolution_errors(const QOperator& op) {
  const auto res = decompose(op);
  const Eigen::MatrixXd& t = op.matrix();
  const Eigen::Index d = t.rows();
  ResolutionErrors e;
  e.reconstruction = (t - res.reconstruct()).norm() / t.norm();
  std::vector<Eigen::MatrixXd> p;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 0; k < res.size(); ++k) {
    p.push_back(res.projection(k).matrix());
    sum += p.back();
  }
  for (std::size_t k = 0; k < p.size(); ++k) {
    e.projections = std::fmax(e.projections, (p[k] * p[k] - p[k]).norm());
    for (std::size_t l = k + 1; l < p.size(); ++l) e.projections = std::fmax(e.projections, (p[k] * p[l]).norm());
  }
  e.identity = (sum - Eigen::MatrixXd::Identity(d, d)).norm();
  return e;
}

Verdict ac7_spectral() {
  Rng rng(1007);
  ResolutionErrors worst;
  const auto merge = [&](const ResolutionErrors& e) {
    worst.reconstruction = std::fmax(worst.reconstruction, e.reconstruction);
    worst.projections = std::fmax(worst.projections, e.projections);
    worst.identity = std::fmax(worst.identity, e.identity);
  };
  for (int n : {4, 8, 16}) {
    const Grid g(n);
    for (int t = 0; t < 3; ++t) {
      // Random symmetric matrix, and a random self-adjoint Hamiltonian.
      const Eigen::Index d = 4 * n;
      Eigen::MatrixXd m(d, d);
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rng.uniform();
      merge(resolution_errors(QOperator::from_matrix(g, m + m.transpose())));
      HamiltonianSpec s(g);
      s.alpha = rng.real_samples(g, 2, 0.5);
      s.beta = rng.complex_samples(g, 2, 0.5);
      const auto re = rng.real_samples(g, 2);
      for (int k = 0; k < n; ++k) s.V[k] = re[k];
      merge(resolution_errors(hamiltonian(s)));
    }
  }
  // Free Hamiltonian: eigenvalues ħ²k²/2m, multiplicity 8 (4 at k = 0 and Nyquist).
  HamiltonianSpec free{Grid(32)};
  free.mass = 0.75;
  free.hbar = 1.25;
  merge(resolution_errors(hamiltonian(free)));
  const auto res = decompose(hamiltonian(free));
  double spectrum = res.size() == 17 ? 0.0 : INFINITY;
  bool mult_ok = res.size() == 17;
  for (std::size_t k = 0; k < res.size() && mult_ok; ++k) {
    const double want = free.hbar * free.hbar * double(k * k) / (2 * free.mass);
    spectrum = std::fmax(spectrum, std::fabs(res.eigenvalues()[k] - want) / std::fmax(1.0, want));
    mult_ok = res.multiplicities()[k] == (k == 0 || k == 16 ? 4 : 8);
  }
  // Reconstruction at grid 64.
  {
    HamiltonianSpec s{Grid(64)};
    s.alpha = rng.real_samples(s.grid, 3, 0.5);
    const auto re = rng.real_samples(s.grid, 3);
    for (int k = 0; k < 64; ++k) s.V[k] = re[k];
    const QOperator h = hamiltonian(s);
    worst.reconstruction = std::fmax(worst.reconstruction, (h.matrix() - decompose(h).reconstruct()).norm() / h.matrix().norm());
  }
  Verdict v;
  v.bound("reconstruction_relative", worst.reconstruction, 1e-9);
  v.bound("idempotence_orthogonality", worst.projections, 1e-10);
  v.bound("resolution_of_identity", worst.identity, 1e-10);
  v.bound("free_spectrum_relative", spectrum, 1e-9);
  v.require("free_multiplicities", mult_ok);
  return v;
}

Verdict ac8_normal() {
  Rng rng(1008);
  const Complex I(0.0, 1.0);
  double constructed = 0.0;
  for (int n = 2; n <= 6; ++n) {
    for (int t = 0; t < 10; ++t) {
      // N0 = c + iK (K real symmetric) is symmetric, normal, and N0 + N0^H = 2c commutes with any N1.
      const Eigen::MatrixXcd n0 = rng.uniform() * Eigen::MatrixXcd::Identity(n, n) + I * rng.symmetric(n).cast<Complex>();
      const Eigen::MatrixXcd m = rng.complex_matrix(n);
      const NormalReport r = normal_conditions({n0, 0.5 * (m + m.transpose())});
      if (!r.block_conditions_hold(1e-12)) constructed = INFINITY;
      constructed = std::fmax(constructed, r.full_commutator);
    }
  }
  const NormalReport witness = normal_conditions({rng.complex_matrix(4), rng.complex_matrix(4)});
  Verdict v;
  v.bound("constructed_full_commutator", constructed, 1e-9);
  v.bound("random_witness", witness.full_commutator, 1e-4, false);
  return v;
}

Verdict ac9_propagator() {
  Rng rng(1009);
  const Grid g(16);
  Verdict v;
  {
    HamiltonianSpec s(g);
    s.alpha = rng.real_samples(g, 1, 0.3);
    for (auto& x : s.V) x = 1.0;
    const double t = 0.3 * s.hbar / hamiltonian(s).matrix().operatorNorm();
    const QFunction psi0 = normalized(rng.band_limited_complex(g, 3));
    const Eigen::MatrixXcd h = qqm::testing::complex_hamiltonian(16, s.mass, s.hbar, s.alpha, s.V);
    const Eigen::VectorXcd want = qqm::testing::complex_evolve(h, as_complex(psi0), t, s.hbar);
    double min_ratio = INFINITY;
    double previous = 0.0;
    std::string errors;
    for (int terms = 1; terms <= 5; ++terms) {
      const double err = (as_complex(dyson_propagator(s, 0.0, t, terms, 2001)(psi0)) - want).norm() * std::sqrt(g.spacing());
      if (terms > 1) min_ratio = std::fmin(min_ratio, previous / err);
      previous = err;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.1e", errors.empty() ? "" : "/", err);
      errors += buf;
    }
    v.note("errors_terms_1_5=" + errors);
    v.bound("min_error_reduction_per_term", min_ratio, 2.0, false);
  }
  {
    // Curated fixture: constant complex potential 1 + 0.5i, initial state ∝ 1 + j,
    // unit factor applied on the left as in the complex reading of U(t, t0)Ψ(t0).
    HamiltonianSpec s(g);
    for (auto& x : s.V) x = Complex(1.0, 0.5);
    const QFunction psi0 = normalized(QFunction::constant(g, {1, 0, 1, 0}));
    const QFunction truth = evolve(EvolutionProblem(s, psi0, 0.0, 0.5, 1e-3)).states.back();
    const QFunction left = dyson_propagator(s, 0.0, 0.5, 12, 2001, UnitPlacement::Left)(psi0);
    v.bound("quaternionic_factorization_discrepancy", norm(left - truth), 1e-3, false);
  }
  return v;
}

Verdict ac10_noncommutativity() {
  const UnitQuaternion u{M_PI / 4, 0, 0}, w{M_PI / 4, M_PI / 2, 0};
  Verdict v;
  v.bound("commutator", commutator_norm(u, w), 0.1, false);
  v.bound("angle_additivity_deviation", angle_additivity_deviation(u, w), 0.1, false);
  return v;
}

Verdict ac11_determinism() {
  const std::filesystem::path dir = QQM_ACCEPTANCE_WORK_DIR;
  std::filesystem::create_directories(dir);
  std::string outputs[2];
  int codes[2];
  for (int run = 0; run < 2; ++run) {
    std::ostringstream out, err;
    codes[run] = cli::run({"check", "--seed", "20240601", "--out", dir.string()}, out, err);
    outputs[run] = out.str();
  }
  Verdict v;
  v.require("byte_identical", !outputs[0].empty() && outputs[0] == outputs[1]);
  v.require("check_exit_0", codes[0] == 0 && codes[1] == 0);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"orthogonality", ac1_orthogonality},
      {"multi-index system", ac2_multi_index},
      {"fourier round-trip", ac3_roundtrip},
      {"realness", ac4_realness},
      {"conservation", ac5_conservation},
      {"complex reduction", ac6_complex_reduction},
      {"spectral theorem", ac7_spectral},
      {"normal operators", ac8_normal},
      {"propagator", ac9_propagator},
      {"non-commutativity", ac10_noncommutativity},
      {"determinism", ac11_determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.note(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::printf("AC%zu %s %s: %s [%.1fs]\n", k + 1, v.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("acceptance passed=%zu failed=%d\n", criteria.size() - failed, failed);
  return failed == 0 ? 0 : 1;
}
