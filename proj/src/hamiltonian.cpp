#include "qqm/hamiltonian.hpp"

#include <cmath>

#include "qqm/csv.hpp"
#include "qqm/errors.hpp"
#include "qqm/expression.hpp"

namespace qqm {

HamiltonianSpec::HamiltonianSpec(Grid g)
    : grid(g), alpha(g.size(), 0.0), beta(g.size()), V(g.size()), W(g.size()) {}

QFunction HamiltonianSpec::gauge() const {
  QFunction a(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    a[k] = {0.0, alpha[k], beta[k].real(), beta[k].imag()};
  }
  return a;
}

QFunction HamiltonianSpec::potential() const {
  QFunction u(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) u[k] = symplectic_join(V[k], W[k]);
  return u;
}

bool HamiltonianSpec::has_gauge() const {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (alpha[k] != 0.0 || beta[k] != Complex{}) return true;
  }
  return false;
}

bool HamiltonianSpec::potential_is_real() const {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (V[k].imag() != 0.0 || W[k] != Complex{}) return false;
  }
  return true;
}

void HamiltonianSpec::validate() const {
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const std::size_t n = grid.size();
  if (alpha.size() != n || beta.size() != n || V.size() != n || W.size() != n) {
    throw DimensionError("Hamiltonian samples do not match the grid size " + std::to_string(n));
  }
}

QFunction covariant_derivative(const HamiltonianSpec& spec, const QFunction& psi) {
  require_same_grid(spec.grid, psi.grid());
  QFunction d = derivative(psi, spec.scheme);
  if (spec.has_gauge()) d -= left_multiply(spec.gauge(), psi);
  return d;
}

QFunction apply_momentum(const HamiltonianSpec& spec, const QFunction& psi) {
  return right_multiply(covariant_derivative(spec, psi), Quaternion::i()) * (-spec.hbar);
}

QFunction apply_hamiltonian(const HamiltonianSpec& spec, const QFunction& psi) {
  require_same_grid(spec.grid, psi.grid());
  // (∂ − A)² = ∂² − ∂∘A − A∘∂ + A², with the direct second derivative for ∂².
  QFunction kinetic = second_derivative(psi, spec.scheme);
  if (spec.has_gauge()) {
    const QFunction a = spec.gauge();
    const QFunction a_psi = left_multiply(a, psi);
    kinetic -= derivative(a_psi, spec.scheme);
    kinetic -= left_multiply(a, derivative(psi, spec.scheme));
    kinetic += left_multiply(a, a_psi);
  }
  kinetic *= -(spec.hbar * spec.hbar) / (2.0 * spec.mass);
  kinetic += left_multiply(spec.potential(), psi);
  return kinetic;
}

QOperator momentum_pi(const HamiltonianSpec& spec) {
  spec.validate();
  return QOperator(spec.grid, [spec](const QFunction& f) { return apply_momentum(spec, f); });
}

QOperator hamiltonian(const HamiltonianSpec& spec) {
  spec.validate();
  return QOperator(spec.grid, [spec](const QFunction& f) { return apply_hamiltonian(spec, f); });
}

ExpectationIntegrands expectation_integrands(const QOperator& op, const QFunction& psi) {
  const QFunction o_psi = op.apply(psi);
  return {right_multiply(o_psi, conj(psi)), right_multiply(psi, conj(o_psi))};
}

double expectation(const QOperator& op, const QFunction& psi, ExpectationOptions opts) {
  const double n = norm(psi);
  if (n == 0.0) throw DomainError("expectation value of the zero state");
  if (opts.require_normalized && std::fabs(n - 1.0) > opts.normalization_tol) {
    throw ValidationError("state is not normalized (norm " + std::to_string(n) + ")");
  }
  // ½[(OΨ)Ψ̄ + Ψ conj(OΨ)] is the real part of (OΨ)Ψ̄, i.e. <OΨ, Ψ>.
  return inner(op.apply(psi), psi);
}

const std::set<std::string>& hamiltonian_config_keys() {
  static const std::set<std::string> keys = {
      "m",       "hbar",    "derivative", "alpha",  "alpha_csv", "beta_re", "beta_im",
      "beta_csv", "V_re",   "V_im",       "V_csv",  "W_re",      "W_im",    "W_csv"};
  return keys;
}

namespace {

std::vector<double> sample_expression(const KeyValueConfig& cfg, const std::string& key,
                                      const Grid& grid) {
  std::vector<double> out(grid.size(), 0.0);
  if (const auto text = cfg.optional(key)) {
    const Expression e = Expression::parse(*text);
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = e(grid.node(k));
  }
  return out;
}

CsvTable load_samples(const KeyValueConfig& cfg, const std::string& key, const Grid& grid) {
  CsvTable t = read_csv(cfg.path(key));
  if (t.rows.size() != grid.size()) {
    throw ConfigError(key + ": " + std::to_string(t.rows.size()) + " rows for a " +
                      std::to_string(grid.size()) + "-point grid");
  }
  const std::size_t cx = t.column("x");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (std::fabs(t.rows[k][cx] - grid.node(k)) > 1e-9) {
      throw ConfigError(key + ": row " + std::to_string(k) + " is off the grid");
    }
  }
  return t;
}

std::vector<Complex> complex_function(const KeyValueConfig& cfg, const std::string& name,
                                      const Grid& grid) {
  std::vector<Complex> out(grid.size());
  const std::string csv_key = name + "_csv";
  if (cfg.has(csv_key)) {
    if (cfg.has(name + "_re") || cfg.has(name + "_im")) {
      throw ConfigError(name + ": give either expressions or " + csv_key + ", not both");
    }
    const CsvTable t = load_samples(cfg, csv_key, grid);
    const std::size_t re = t.column("re"), im = t.column("im");
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = {t.rows[k][re], t.rows[k][im]};
    return out;
  }
  const auto re = sample_expression(cfg, name + "_re", grid);
  const auto im = sample_expression(cfg, name + "_im", grid);
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = {re[k], im[k]};
  return out;
}

}  // namespace

HamiltonianSpec hamiltonian_from_config(const KeyValueConfig& cfg, const Grid& grid) {
  HamiltonianSpec spec(grid);
  spec.mass = cfg.number("m", 1.0);
  spec.hbar = cfg.number("hbar", 1.0);
  const std::string scheme = cfg.string("derivative", "spectral");
  if (scheme == "spectral") {
    spec.scheme = DerivativeScheme::Spectral;
  } else if (scheme == "central") {
    spec.scheme = DerivativeScheme::CentralDifference;
  } else {
    throw ConfigError("derivative must be 'spectral' or 'central', got '" + scheme + "'");
  }
  if (cfg.has("alpha_csv")) {
    if (cfg.has("alpha")) throw ConfigError("alpha: give either an expression or alpha_csv");
    const CsvTable t = load_samples(cfg, "alpha_csv", grid);
    const std::size_t c = t.column("value");
    for (std::size_t k = 0; k < grid.size(); ++k) spec.alpha[k] = t.rows[k][c];
  } else {
    spec.alpha = sample_expression(cfg, "alpha", grid);
  }
  spec.beta = complex_function(cfg, "beta", grid);
  spec.V = complex_function(cfg, "V", grid);
  spec.W = complex_function(cfg, "W", grid);
  try {
    spec.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

}  // namespace qqm
