#pragma once

/**
 * Time evolution under ħ ∂Ψ/∂t i = H Ψ. Because i multiplies from the right,
 * the explicit form is ∂Ψ/∂t = −(1/ħ)(H Ψ) i, a real-linear (not complex-
 * linear) right-hand side integrated here with classical RK4.
 *
 * Probability density, current and source:
 *   ρ = Ψ Ψ̄,   J = (1/2m)[(ΠΨ)Ψ̄ + Ψ conj(ΠΨ)],   g = (1/ħ)(Ψ i Ψ̄ Ū − U Ψ i Ψ̄),
 * with ∂ρ/∂t + ∂J/∂x = g. g vanishes for real U.
 */

#include <functional>
#include <string>
#include <vector>

#include "qqm/hamiltonian.hpp"

namespace qqm {

struct EvolutionProblem {
  EvolutionProblem(HamiltonianSpec s, QFunction psi, double start, double end, double step)
      : spec(std::move(s)), psi0(std::move(psi)), t0(start), t1(end), dt(step) {}

  HamiltonianSpec spec;
  QFunction psi0;
  double t0;
  double t1;
  double dt;
  bool require_normalized = true;
};

/// Validates the problem and returns the exact number of steps.
std::size_t step_count(const EvolutionProblem& problem);

/// −(1/ħ)(H Ψ) i.
QFunction schrodinger_rhs(const HamiltonianSpec& spec, const QFunction& psi);

/// ħ dt k_max² / 2m with k_max = n/2; values above 1 risk instability.
double stability_number(const HamiltonianSpec& spec, double dt);
/// A step size comfortably inside the RK4 stability region.
double suggested_dt(const HamiltonianSpec& spec);

/// One RK4 step. Throws InstabilityError on non-finite or exploding values.
QFunction step(const HamiltonianSpec& spec, const QFunction& psi, double dt);

/// ρ, J, g at one instant, plus the largest non-real part seen while
/// forming them as full quaternion products.
struct Densities {
  std::vector<double> rho;
  std::vector<double> J;
  std::vector<double> g;
  double max_nonreal = 0.0;
};
Densities densities(const HamiltonianSpec& spec, const QFunction& psi);

struct ContinuityReport {
  std::vector<double> times;
  std::vector<std::vector<double>> rho;
  std::vector<std::vector<double>> J;
  std::vector<std::vector<double>> g;
  /// |∂ρ/∂t + ∂J/∂x − g| per node; second-order time differences (centered
  /// inside, one-sided at the ends).
  std::vector<std::vector<double>> residual;
  std::vector<double> max_residual;
  std::vector<double> total_norm;  ///< ∫ρ dx
  std::vector<double> integral_g;  ///< ∫g dx
  std::vector<double> norm_rate;   ///< d/dt ∫ρ dx, fourth-order time differences
  double max_nonreal = 0.0;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<QFunction> states;
  ContinuityReport report;
  std::vector<std::string> warnings;
};

/// Diagnostics known before integrating (e.g. a step beyond the stability bound).
std::vector<std::string> evolution_warnings(const EvolutionProblem& problem);

/// Needs at least two steps for the time differences.
EvolutionResult evolve(const EvolutionProblem& problem);

/// Ψ ↦ a Ψ b.
QOperator superop(const QFunction& a, const Quaternion& b);
QOperator superop(const Grid& grid, const Quaternion& a, const Quaternion& b);
/// Ψ ↦ a(Ψ) b for an operator a.
QOperator superop(const QOperator& a, const Quaternion& b);

/**
 * Where the unit factor of each (H/ħ | −i) lands when the series acts on a state.
 *
 * Right: sandwich semantics, (H/ħ)(Ψ)(−i). H commutes with right
 * multiplication, so the series matches the true evolution for every
 * initial state.
 * Left: (H/ħ)(−i Ψ), the complex-QM reading of U(t, t0)Ψ(t0). It agrees with
 * Right for complex states and complex-coefficient H only.
 */
enum class UnitPlacement { Left, Right };

using TimeDependentHamiltonian = std::function<QOperator(double)>;

/**
 * Truncated time-ordered series U = 1 + Σ_{n=1}^{n_terms} ∫..∫ K(t1)..K(tn),
 * nested integrals by cumulative trapezoidal quadrature on n_quad nodes.
 */
QOperator dyson_propagator(const TimeDependentHamiltonian& hamiltonian_at, double hbar,
                           const Grid& grid, double t0, double t1, int n_terms, int n_quad,
                           UnitPlacement placement = UnitPlacement::Left);
QOperator dyson_propagator(const HamiltonianSpec& spec, double t0, double t1, int n_terms,
                           int n_quad, UnitPlacement placement = UnitPlacement::Left);

/// n_steps RK4 steps of size dt as one operator (the short-time product propagator).
QOperator short_time_propagator(const HamiltonianSpec& spec, double dt, std::size_t n_steps);

}  // namespace qqm
