#include "qqm/dynamics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qqm/errors.hpp"

namespace qqm {

std::size_t step_count(const EvolutionProblem& p) {
  p.spec.validate();
  require_same_grid(p.spec.grid, p.psi0.grid());
  if (!(p.dt > 0.0)) throw DomainError("dt must be positive");
  const double span = p.t1 - p.t0;
  if (!(p.dt <= span)) throw DomainError("dt must not exceed t1 - t0");
  const double q = span / p.dt;
  const double n = std::round(q);
  if (q < std::nextafter(n, -std::numeric_limits<double>::infinity()) ||
      q > std::nextafter(n, std::numeric_limits<double>::infinity())) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "(t1 - t0)/dt = " << q << " is not an integer step count";
    throw DomainError(msg.str());
  }
  if (p.require_normalized) {
    const double nrm = norm(p.psi0);
    if (std::fabs(nrm - 1.0) > 1e-10) {
      throw ValidationError("initial state is not normalized (norm " + std::to_string(nrm) + ")");
    }
  }
  return static_cast<std::size_t>(n);
}

QFunction schrodinger_rhs(const HamiltonianSpec& spec, const QFunction& psi) {
  return right_multiply(apply_hamiltonian(spec, psi), Quaternion::i()) * (-1.0 / spec.hbar);
}

double stability_number(const HamiltonianSpec& spec, double dt) {
  const double kmax = static_cast<double>(spec.grid.size()) / 2.0;
  return spec.hbar * dt * kmax * kmax / (2.0 * spec.mass);
}

double suggested_dt(const HamiltonianSpec& spec) {
  double amax = 0.0, umax = 0.0;
  const QFunction a = spec.gauge();
  const QFunction u = spec.potential();
  for (std::size_t k = 0; k < spec.grid.size(); ++k) {
    amax = std::fmax(amax, abs(a[k]));
    umax = std::fmax(umax, abs(u[k]));
  }
  const double kmax = static_cast<double>(spec.grid.size()) / 2.0 + amax;
  const double omega = spec.hbar * kmax * kmax / (2.0 * spec.mass) + umax / spec.hbar;
  // ω dt = 0.9: well inside the RK4 imaginary-axis limit 2√2, and below the
  // stability-number warning threshold since ω ≥ ħ k_max²/2m.
  return 0.9 / omega;
}

QFunction step(const HamiltonianSpec& spec, const QFunction& psi, double dt) {
  const QFunction k1 = schrodinger_rhs(spec, psi);
  const QFunction k2 = schrodinger_rhs(spec, psi + (0.5 * dt) * k1);
  const QFunction k3 = schrodinger_rhs(spec, psi + (0.5 * dt) * k2);
  const QFunction k4 = schrodinger_rhs(spec, psi + dt * k3);
  QFunction out(psi.grid());
  const double w = dt / 6.0;
  for (std::size_t k = 0; k < psi.size(); ++k) {
    out[k] = psi[k] + w * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
  }
  const double m = out.max_abs();
  if (!std::isfinite(m) || m > 1e100) {
    const double dts = suggested_dt(spec);
    std::ostringstream msg;
    msg << "integrator instability at dt = " << dt << "; try dt <= " << dts;
    throw InstabilityError(msg.str(), dts);
  }
  return out;
}

Densities densities(const HamiltonianSpec& spec, const QFunction& psi) {
  const std::size_t n = psi.size();
  const QFunction pi_psi = apply_momentum(spec, psi);
  const QFunction u = spec.potential();
  Densities d;
  d.rho.resize(n);
  d.J.resize(n);
  d.g.resize(n);
  const auto nonreal = [](const Quaternion& q) {
    return std::fmax(std::fmax(std::fabs(q.x1), std::fabs(q.x2)), std::fabs(q.x3));
  };
  for (std::size_t k = 0; k < n; ++k) {
    const Quaternion& p = psi[k];
    const Quaternion pbar = conj(p);
    const Quaternion rho = p * pbar;
    const Quaternion j =
        (pi_psi[k] * pbar + p * conj(pi_psi[k])) * (1.0 / (2.0 * spec.mass));
    const Quaternion q = p * Quaternion::i() * pbar;
    const Quaternion g = (q * conj(u[k]) - u[k] * q) * (1.0 / spec.hbar);
    d.rho[k] = rho.x0;
    d.J[k] = j.x0;
    d.g[k] = g.x0;
    d.max_nonreal = std::fmax(d.max_nonreal, std::fmax(nonreal(rho), std::fmax(nonreal(j), nonreal(g))));
  }
  return d;
}

namespace {

// Second-order first derivative of a uniformly sampled sequence at index t.
template <typename Get>
double time_derivative(std::size_t t, std::size_t count, double dt, Get&& at) {
  if (t == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * dt);
  if (t + 1 == count) return (3.0 * at(t) - 4.0 * at(t - 1) + at(t - 2)) / (2.0 * dt);
  return (at(t + 1) - at(t - 1)) / (2.0 * dt);
}

// Fourth-order variant for the integrated norm, whose rate is compared with
// ∫g at a much tighter tolerance than the pointwise residual. Falls back to
// second order on short trajectories.
template <typename Get>
double time_derivative4(std::size_t t, std::size_t count, double dt, Get&& at) {
  if (count < 5) return time_derivative(t, count, dt, at);
  const double w = 12.0 * dt;
  if (t == 0) return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / w;
  if (t == 1) return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / w;
  const std::size_t e = count - 1;
  if (t == e) {
    return (25.0 * at(e) - 48.0 * at(e - 1) + 36.0 * at(e - 2) - 16.0 * at(e - 3) + 3.0 * at(e - 4)) / w;
  }
  if (t + 1 == e) {
    return (3.0 * at(e) + 10.0 * at(e - 1) - 18.0 * at(e - 2) + 6.0 * at(e - 3) - at(e - 4)) / w;
  }
  return (-at(t + 2) + 8.0 * at(t + 1) - 8.0 * at(t - 1) + at(t - 2)) / w;
}

double sum(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

}  // namespace

std::vector<std::string> evolution_warnings(const EvolutionProblem& problem) {
  std::vector<std::string> out;
  if (stability_number(problem.spec, problem.dt) > 1.0) {
    std::ostringstream msg;
    msg << "stability number hbar*dt*kmax^2/2m = " << stability_number(problem.spec, problem.dt)
        << " exceeds 1; suggested dt <= " << suggested_dt(problem.spec);
    out.push_back(msg.str());
  }
  return out;
}

EvolutionResult evolve(const EvolutionProblem& problem) {
  const std::size_t steps = step_count(problem);
  if (steps < 2) throw DomainError("evolve needs at least two steps");
  const HamiltonianSpec& spec = problem.spec;
  const Grid& grid = spec.grid;
  const double h = grid.spacing();

  EvolutionResult res;
  res.warnings = evolution_warnings(problem);

  res.times.reserve(steps + 1);
  res.states.reserve(steps + 1);
  QFunction psi = problem.psi0;
  for (std::size_t s = 0; s <= steps; ++s) {
    res.times.push_back(problem.t0 + static_cast<double>(s) * problem.dt);
    if (s > 0) psi = step(spec, psi, problem.dt);
    res.states.push_back(psi);
  }

  ContinuityReport& rep = res.report;
  rep.times = res.times;
  const std::size_t count = res.states.size();
  for (const auto& state : res.states) {
    Densities d = densities(spec, state);
    rep.max_nonreal = std::fmax(rep.max_nonreal, d.max_nonreal);
    rep.total_norm.push_back(sum(d.rho) * h);
    rep.integral_g.push_back(sum(d.g) * h);
    rep.rho.push_back(std::move(d.rho));
    rep.J.push_back(std::move(d.J));
    rep.g.push_back(std::move(d.g));
  }
  for (std::size_t t = 0; t < count; ++t) {
    QFunction jfun(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) jfun[k] = {rep.J[t][k], 0.0, 0.0, 0.0};
    const QFunction dj = derivative(jfun, spec.scheme);
    std::vector<double> r(grid.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double drho = time_derivative(t, count, problem.dt,
                                          [&](std::size_t i) { return rep.rho[i][k]; });
      r[k] = std::fabs(drho + dj[k].x0 - rep.g[t][k]);
      worst = std::fmax(worst, r[k]);
    }
    rep.residual.push_back(std::move(r));
    rep.max_residual.push_back(worst);
    rep.norm_rate.push_back(
        time_derivative4(t, count, problem.dt, [&](std::size_t i) { return rep.total_norm[i]; }));
  }
  return res;
}

QOperator superop(const QFunction& a, const Quaternion& b) {
  return QOperator(a.grid(),
                   [a, b](const QFunction& f) { return right_multiply(left_multiply(a, f), b); });
}

QOperator superop(const Grid& grid, const Quaternion& a, const Quaternion& b) {
  return QOperator(grid,
                   [a, b](const QFunction& f) { return right_multiply(left_multiply(a, f), b); });
}

QOperator superop(const QOperator& a, const Quaternion& b) {
  return QOperator(a.grid(), [a, b](const QFunction& f) { return right_multiply(a.apply(f), b); });
}

QOperator dyson_propagator(const TimeDependentHamiltonian& hamiltonian_at, double hbar,
                           const Grid& grid, double t0, double t1, int n_terms, int n_quad,
                           UnitPlacement placement) {
  if (n_terms < 1) throw DomainError("dyson_propagator needs n_terms >= 1");
  if (n_quad < 2) throw DomainError("dyson_propagator needs n_quad >= 2");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const auto nodes = static_cast<std::size_t>(n_quad);
  std::vector<QOperator> h_at;
  h_at.reserve(nodes);
  for (std::size_t a = 0; a < nodes; ++a) {
    const double t = t0 + (t1 - t0) * static_cast<double>(a) / static_cast<double>(nodes - 1);
    h_at.push_back(hamiltonian_at(t));
  }
  const double dtau = (t1 - t0) / static_cast<double>(nodes - 1);
  const Quaternion minus_i = -Quaternion::i();

  return QOperator(grid, [=](const QFunction& psi0) {
    const auto kernel = [&](std::size_t a, const QFunction& f) {
      if (placement == UnitPlacement::Right) {
        return right_multiply(h_at[a].apply(f), minus_i) * (1.0 / hbar);
      }
      return h_at[a].apply(left_multiply(minus_i, f)) * (1.0 / hbar);
    };
    QFunction total = psi0;
    // level[a] holds the n-th nested integral evaluated at upper limit τ_a.
    std::vector<QFunction> level(nodes, psi0);
    for (int n = 1; n <= n_terms; ++n) {
      std::vector<QFunction> integrand;
      integrand.reserve(nodes);
      for (std::size_t a = 0; a < nodes; ++a) integrand.push_back(kernel(a, level[a]));
      std::vector<QFunction> next;
      next.reserve(nodes);
      next.emplace_back(grid);
      for (std::size_t a = 1; a < nodes; ++a) {
        next.push_back(next.back() + (0.5 * dtau) * (integrand[a - 1] + integrand[a]));
      }
      total += next.back();
      level = std::move(next);
    }
    return total;
  });
}

QOperator dyson_propagator(const HamiltonianSpec& spec, double t0, double t1, int n_terms,
                           int n_quad, UnitPlacement placement) {
  const QOperator h = hamiltonian(spec);
  return dyson_propagator([h](double) { return h; }, spec.hbar, spec.grid, t0, t1, n_terms,
                          n_quad, placement);
}

QOperator short_time_propagator(const HamiltonianSpec& spec, double dt, std::size_t n_steps) {
  spec.validate();
  return QOperator(spec.grid, [spec, dt, n_steps](const QFunction& f) {
    QFunction psi = f;
    for (std::size_t s = 0; s < n_steps; ++s) psi = step(spec, psi, dt);
    return psi;
  });
}

}  // namespace qqm
