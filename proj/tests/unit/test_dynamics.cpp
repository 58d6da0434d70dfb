#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qqm/dynamics.hpp"
#include "qqm/errors.hpp"
#include "random.hpp"

using namespace qqm;
using qqm::testing::Rng;
using qqm::testing::normalized;

namespace {

QFunction plane(const Grid& g, int k, const Quaternion& amp = Quaternion::one()) {
  return QFunction::sample(g, [&](double x) { return amp * Quaternion{std::cos(k * x), std::sin(k * x), 0, 0}; });
}

QFunction phase_right(const QFunction& f, double angle) {
  return right_multiply(f, Quaternion{std::cos(angle), std::sin(angle), 0, 0});
}

HamiltonianSpec real_spec(Rng& rng, const Grid& g) {
  HamiltonianSpec s(g);
  s.alpha = rng.real_samples(g, 2, 0.3);
  s.beta = rng.complex_samples(g, 2, 0.3);
  for (auto& v : s.V) v = 0.0;
  const auto re = rng.real_samples(g, 2);
  for (std::size_t k = 0; k < g.size(); ++k) s.V[k] = re[k];
  return s;
}

Eigen::VectorXcd as_complex(const QFunction& f) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t k = 0; k < f.size(); ++k) v(static_cast<Eigen::Index>(k)) = {f[k].x0, f[k].x1};
  return v;
}

QFunction run(const HamiltonianSpec& s, QFunction psi, double dt, int steps) {
  for (int n = 0; n < steps; ++n) psi = step(s, psi, dt);
  return psi;
}

}  // namespace

TEST_CASE("step count") {
  const Grid g(8);
  const HamiltonianSpec s(g);
  const QFunction psi = normalized(QFunction::constant(g, Quaternion::one()));
  CHECK(step_count(EvolutionProblem(s, psi, 0.0, 1.0, 0.1)) == 10);
  CHECK(step_count(EvolutionProblem(s, psi, 0.0, 0.3, 0.1)) == 3);
  CHECK_THROWS_AS(step_count(EvolutionProblem(s, psi, 0.0, 1.0, 0.3)), DomainError);
  CHECK_THROWS_AS(step_count(EvolutionProblem(s, psi, 0.0, 1.0, 2.0)), DomainError);
  CHECK_THROWS_AS(step_count(EvolutionProblem(s, psi, 0.0, 1.0, -0.1)), DomainError);
  CHECK_THROWS_AS(step_count(EvolutionProblem(s, 2.0 * psi, 0.0, 1.0, 0.1)), ValidationError);
  EvolutionProblem loose(s, 2.0 * psi, 0.0, 1.0, 0.1);
  loose.require_normalized = false;
  CHECK(step_count(loose) == 10);
  CHECK_THROWS_AS(step_count(EvolutionProblem(s, QFunction(Grid(16)), 0.0, 1.0, 0.1)), DimensionError);
}

TEST_CASE("energy eigenstates pick up a phase on the right") {
  const Grid g(32);
  HamiltonianSpec s(g);
  s.mass = 1.3;
  s.hbar = 0.8;
  for (auto& v : s.V) v = 0.4;
  const Quaternion amp{0.5, -0.2, 0.7, 0.3};  // quaternionic amplitude: left and right phases differ
  for (int k : {0, 1, -3, 5}) {
    const QFunction psi0 = plane(g, k, amp);
    const double energy = s.hbar * s.hbar * k * k / (2 * s.mass) + 0.4;
    const double t = 0.5, dt = 1e-3;
    const QFunction got = run(s, psi0, dt, 500);
    const QFunction want = phase_right(psi0, -energy * t / s.hbar);
    // RK4 on a single frequency ω: local phase error (ω dt)⁵/120 per step.
    const double wdt = energy / s.hbar * dt;
    CHECK(max_distance(got, want) < 2.0 * 500 * std::pow(wdt, 5) / 120 * abs(amp) + 1e-13);
    if (k != 0) {
      // The same phase on the left is a different state.
      const QFunction left = left_multiply(Quaternion{std::cos(energy * t / s.hbar), -std::sin(energy * t / s.hbar), 0, 0}, psi0);
      CHECK(max_distance(got, left) > 1e-2);
    }
  }
}

TEST_CASE("RK4 is fourth order") {
  Rng rng(91);
  const Grid g(16);
  const HamiltonianSpec s = real_spec(rng, g);
  const QFunction psi0 = normalized(rng.band_limited(g, 3));
  const QFunction ref = run(s, psi0, 0.5 / 512, 512);
  const double e1 = max_distance(run(s, psi0, 0.5 / 16, 16), ref);
  const double e2 = max_distance(run(s, psi0, 0.5 / 32, 32), ref);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("generator consistency is first order") {
  Rng rng(92);
  const Grid g(16);
  const HamiltonianSpec s = real_spec(rng, g);
  const QFunction psi = normalized(rng.band_limited(g, 3));
  const QFunction f = schrodinger_rhs(s, psi);
  double previous = 0.0;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const QFunction u = short_time_propagator(s, dt, 1)(psi);
    const double err = max_distance((1.0 / dt) * (u - psi), f);
    if (previous > 0.0) CHECK(previous / err == doctest::Approx(2.0).epsilon(0.05));
    previous = err;
  }
}

TEST_CASE("complex sector matches the complex reference") {
  Rng rng(93);
  const Grid g(32);
  HamiltonianSpec s(g);
  s.mass = 0.9;
  s.hbar = 1.1;
  s.alpha = rng.real_samples(g, 2, 0.5);
  s.V = rng.complex_samples(g, 2, 0.5);  // complex V keeps the complex sector closed
  const QFunction psi0 = normalized(rng.band_limited_complex(g, 4));
  EvolutionProblem p(s, psi0, 0.0, 0.5, 1e-3);
  const EvolutionResult r = evolve(p);
  const Eigen::MatrixXcd h = qqm::testing::complex_hamiltonian(32, s.mass, s.hbar, s.alpha, s.V);
  double worst = 0.0, leak = 0.0;
  for (std::size_t n = 0; n < r.times.size(); n += 50) {
    const Eigen::VectorXcd want = qqm::testing::complex_evolve(h, as_complex(psi0), r.times[n], s.hbar);
    worst = std::fmax(worst, std::sqrt(g.spacing()) * (as_complex(r.states[n]) - want).norm());
    for (std::size_t k = 0; k < g.size(); ++k) {
      leak = std::fmax(leak, std::fmax(std::fabs(r.states[n][k].x2), std::fabs(r.states[n][k].x3)));
    }
  }
  CHECK(worst < 1e-7);
  CHECK(leak < 1e-10);
}

TEST_CASE("densities are real and the density is non-negative") {
  Rng rng(94);
  const Grid g(32);
  for (int t = 0; t < 20; ++t) {
    HamiltonianSpec s = real_spec(rng, g);
    s.V = rng.complex_samples(g, 2);
    s.W = rng.complex_samples(g, 2);
    const Densities d = densities(s, rng.band_limited(g, 5));
    CHECK(d.max_nonreal < 1e-12);
    for (double r : d.rho) CHECK(r >= 0.0);
  }
  // Real U: no source.
  const HamiltonianSpec s = real_spec(rng, g);
  const Densities d = densities(s, rng.band_limited(g, 5));
  for (double v : d.g) CHECK(std::fabs(v) < 1e-13);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(d.rho[k] >= 0.0);
}

TEST_CASE("current of a plane wave") {
  const Grid g(32);
  HamiltonianSpec s(g);
  s.mass = 2.0;
  s.hbar = 0.5;
  const int k = 3;
  const Densities d = densities(s, plane(g, k, {1, 0, 0.5, 0}));
  for (std::size_t n = 0; n < g.size(); ++n) {
    CHECK(d.rho[n] == doctest::Approx(1.25));
    CHECK(d.J[n] == doctest::Approx(s.hbar * k / s.mass * 1.25));
  }
}

TEST_CASE("real potential conserves the norm") {
  Rng rng(95);
  const Grid g(64);
  const HamiltonianSpec s = real_spec(rng, g);
  const EvolutionResult r = evolve(EvolutionProblem(s, normalized(rng.band_limited(g, 4)), 0.0, 1.0, 1e-3));
  REQUIRE(r.times.size() == 1001);
  CHECK(r.warnings.empty());
  const double n0 = r.report.total_norm.front();
  double drift = 0.0, rate = 0.0;
  for (std::size_t n = 0; n < r.times.size(); ++n) {
    drift = std::fmax(drift, std::fabs(r.report.total_norm[n] - n0));
    rate = std::fmax(rate, std::fabs(r.report.norm_rate[n]));
    CHECK(std::fabs(r.report.integral_g[n]) < 1e-14);
  }
  CHECK(drift < 1e-8);
  CHECK(rate < 1e-8);
  CHECK(r.report.max_nonreal < 1e-12);
}

TEST_CASE("quaternionic potential: the norm changes at the rate of the source") {
  Rng rng(96);
  const Grid g(64);
  HamiltonianSpec s = real_spec(rng, g);
  s.W = rng.complex_samples(g, 2, 0.5);
  const EvolutionResult r = evolve(EvolutionProblem(s, normalized(rng.band_limited(g, 4)), 0.0, 0.5, 1e-3));
  double scale = 0.0, mismatch = 0.0;
  for (std::size_t n = 0; n < r.times.size(); ++n) {
    scale = std::fmax(scale, std::fabs(r.report.integral_g[n]));
    mismatch = std::fmax(mismatch, std::fabs(r.report.norm_rate[n] - r.report.integral_g[n]));
  }
  CHECK(scale > 1e-4);
  CHECK(mismatch / scale < 1e-6);
  CHECK(r.report.max_nonreal < 1e-12);
}

TEST_CASE("continuity residual is second order in dt") {
  const Grid g(64);
  HamiltonianSpec s(g);
  const QFunction packet = normalized(QFunction::sample(g, [](double x) {
    const double e = std::exp(-2.0 * (x - M_PI) * (x - M_PI));
    return Quaternion{e * std::cos(2 * x), e * std::sin(2 * x), 0.5 * e, 0};
  }));
  std::vector<double> res;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    const EvolutionResult r = evolve(EvolutionProblem(s, packet, 0.0, 0.2, dt));
    double m = 0.0;
    for (double v : r.report.max_residual) m = std::fmax(m, v);
    res.push_back(m);
  }
  for (std::size_t a = 0; a + 1 < res.size(); ++a) {
    CHECK(std::log2(res[a] / res[a + 1]) == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("superoperators") {
  Rng rng(97);
  const Grid g(16);
  const QFunction psi = rng.band_limited(g, 3);
  CHECK(max_distance(superop(g, Quaternion::one(), Quaternion::one())(psi), psi) == 0.0);
  for (int t = 0; t < 20; ++t) {
    const Quaternion a = rng.quaternion(), b = rng.quaternion(), c = rng.quaternion(), d = rng.quaternion();
    const QFunction two = superop(g, a, b)(superop(g, c, d)(psi));
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(max_abs_diff(two[k], a * c * psi[k] * d * b) < 1e-13);
    }
  }
  const QFunction f = rng.band_limited(g, 2);
  const Quaternion q = rng.quaternion();
  const QFunction fq = superop(f, q)(psi);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(max_abs_diff(fq[k], f[k] * psi[k] * q) < 1e-14);

  // (H/ħ | −i) is the right side of the evolution equation.
  const HamiltonianSpec s = real_spec(rng, g);
  const QOperator k = superop((1.0 / s.hbar) * hamiltonian(s), -Quaternion::i());
  CHECK(max_distance(k(plane(g, 2)), schrodinger_rhs(s, plane(g, 2))) < 1e-12);
  CHECK(max_distance(k(psi), schrodinger_rhs(s, psi)) < 1e-12);
}

TEST_CASE("Dyson series") {
  Rng rng(98);
  const Grid g(16);
  SUBCASE("vanishing Hamiltonian gives the identity") {
    const auto zero = [&](double) { return 0.0 * identity_operator(g); };
    CHECK(operator_distance(dyson_propagator(zero, 1.0, g, 0.0, 1.0, 3, 11), identity_operator(g)) < 1e-15);
  }
  SUBCASE("complex data: error shrinks with every term") {
    HamiltonianSpec s(g);
    s.alpha = rng.real_samples(g, 1, 0.3);
    for (auto& v : s.V) v = 1.0;
    const double hnorm = hamiltonian(s).matrix().operatorNorm();
    const double t = 0.3 * s.hbar / hnorm;
    const QFunction psi0 = normalized(rng.band_limited_complex(g, 3));
    const Eigen::MatrixXcd h = qqm::testing::complex_hamiltonian(16, s.mass, s.hbar, s.alpha, s.V);
    const Eigen::VectorXcd want = qqm::testing::complex_evolve(h, as_complex(psi0), t, s.hbar);
    double previous = INFINITY;
    for (int terms = 1; terms <= 5; ++terms) {
      const QFunction got = dyson_propagator(s, 0.0, t, terms, 401)(psi0);
      const double err = (as_complex(got) - want).norm();
      CHECK(err < 0.5 * previous);
      previous = err;
    }
  }
  SUBCASE("quaternionic data: placement decides factorization") {
    HamiltonianSpec s(g);
    for (auto& v : s.V) v = Complex(1.0, 0.5);
    const QFunction psi0 = normalized(QFunction::constant(g, {1, 0, 1, 0}));
    const double t = 0.5;
    const QFunction truth = evolve(EvolutionProblem(s, psi0, 0.0, t, 1e-3)).states.back();
    // Nested trapezoid error is O(h²) ≈ 1e-9 on 2001 nodes.
    const QFunction left = dyson_propagator(s, 0.0, t, 12, 2001, UnitPlacement::Left)(psi0);
    const QFunction right = dyson_propagator(s, 0.0, t, 12, 2001, UnitPlacement::Right)(psi0);
    CHECK(norm(left - truth) > 1e-3);
    CHECK(norm(right - truth) < 1e-8);
    // Complex initial data: both placements agree.
    const QFunction c0 = normalized(QFunction::constant(g, {1, 1, 0, 0}));
    CHECK(norm(dyson_propagator(s, 0.0, t, 8, 101, UnitPlacement::Left)(c0) -
               dyson_propagator(s, 0.0, t, 8, 101, UnitPlacement::Right)(c0)) < 1e-12);
  }
  CHECK_THROWS_AS(dyson_propagator(HamiltonianSpec(g), 0.0, 1.0, 0, 11), DomainError);
}

TEST_CASE("short-time propagator preserves the real inner product for real U") {
  Rng rng(99);
  const Grid g(32);
  const HamiltonianSpec s = real_spec(rng, g);
  const QOperator u = short_time_propagator(s, 1e-3, 200);
  for (int t = 0; t < 10; ++t) {
    const QFunction a = rng.band_limited(g, 3), b = rng.band_limited(g, 3);
    CHECK(std::fabs(inner(u(a), u(b)) - inner(a, b)) < 1e-8);
  }
  // It is the product of single steps.
  const QFunction psi = rng.band_limited(g, 3);
  CHECK(max_distance(u(psi), run(s, psi, 1e-3, 200)) < 1e-12);
}

TEST_CASE("unstable step size raises with a suggested dt") {
  Rng rng(100);
  const Grid g(64);
  const HamiltonianSpec s(g);
  QFunction noise(g);
  for (std::size_t k = 0; k < g.size(); ++k) noise[k] = rng.quaternion();
  EvolutionProblem p(s, normalized(noise), 0.0, 100.0, 0.1);
  CHECK(stability_number(s, 0.1) > 1.0);
  try {
    evolve(p);
    FAIL("expected instability");
  } catch (const InstabilityError& e) {
    CHECK(e.suggested_dt() > 0.0);
    CHECK(e.suggested_dt() < 0.1);
    CHECK(stability_number(s, e.suggested_dt()) < 1.0);
  }
}
