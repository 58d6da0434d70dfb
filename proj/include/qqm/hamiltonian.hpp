#pragma once

/**
 * Quaternionic Hamiltonian on the periodic interval,
 *
 *   H Ψ = −(ħ²/2m) (∂x − A)((∂x − A) Ψ) + U Ψ,   A = α i + β j,   U = V + W j,
 *
 * with α real, β, V, W complex, and A, U acting by left multiplication. The
 * generalized momentum is Π Ψ = −ħ (∂x − A) Ψ i (i on the right).
 *
 * H is self-adjoint under the real inner product exactly when U is real
 * (Im V = 0 and W = 0); otherwise it is neither hermitian nor anti-hermitian.
 */

#include <set>
#include <string>
#include <vector>

#include "qqm/config.hpp"
#include "qqm/operator.hpp"

namespace qqm {

struct HamiltonianSpec {
  explicit HamiltonianSpec(Grid g);

  Grid grid;
  double mass = 1.0;
  double hbar = 1.0;
  std::vector<double> alpha;   ///< i-component of the gauge potential
  std::vector<Complex> beta;   ///< j-component of the gauge potential
  std::vector<Complex> V;
  std::vector<Complex> W;
  DerivativeScheme scheme = DerivativeScheme::Spectral;

  /// Gauge potential A = α i + β j per node (pure imaginary).
  QFunction gauge() const;
  /// U = V + W j per node.
  QFunction potential() const;

  bool has_gauge() const;
  /// Im V = 0 and W = 0 everywhere.
  bool potential_is_real() const;

  /// Throws DimensionError/DomainError when samples or constants are inconsistent.
  void validate() const;
};

/// (∂x − A) Ψ.
QFunction covariant_derivative(const HamiltonianSpec& spec, const QFunction& psi);
/// Π Ψ = −ħ (∂x − A) Ψ i.
QFunction apply_momentum(const HamiltonianSpec& spec, const QFunction& psi);
QFunction apply_hamiltonian(const HamiltonianSpec& spec, const QFunction& psi);

QOperator momentum_pi(const HamiltonianSpec& spec);
QOperator hamiltonian(const HamiltonianSpec& spec);

struct ExpectationOptions {
  bool require_normalized = false;
  double normalization_tol = 1e-10;
};

/// <O> = ½ ∫ [(OΨ) conj(Ψ) + Ψ conj(OΨ)] dx, real for every O.
double expectation(const QOperator& op, const QFunction& psi, ExpectationOptions opts = {});

/// Pointwise integrands (OΨ) conj(Ψ) and Ψ conj(OΨ); nodewise conjugates of each other.
struct ExpectationIntegrands {
  QFunction first;
  QFunction second;
};
ExpectationIntegrands expectation_integrands(const QOperator& op, const QFunction& psi);

/// Keys understood by hamiltonian_from_config.
const std::set<std::string>& hamiltonian_config_keys();

/**
 * Builds a spec from m, hbar, derivative (spectral|central) and sampled
 * functions alpha, beta_re, beta_im, V_re, V_im, W_re, W_im given as
 * expressions in x. A `<name>_csv` key instead reads samples from a CSV file
 * with columns x,value (alpha) or x,re,im (complex functions).
 */
HamiltonianSpec hamiltonian_from_config(const KeyValueConfig& cfg, const Grid& grid);

}  // namespace qqm
