#include "qqm/hilbert.hpp"

#include <cmath>
#include <string>

#include "qqm/errors.hpp"

namespace qqm {

Grid::Grid(std::size_t n_points) : n_(n_points) {
  if (n_points < 4) {
    throw DomainError("grid needs at least 4 points, got " + std::to_string(n_points));
  }
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(n_);
  for (std::size_t k = 0; k < n_; ++k) xs[k] = node(k);
  return xs;
}

QFunction::QFunction(Grid grid) : grid_(grid), values_(grid.size()) {}

QFunction::QFunction(Grid grid, std::vector<Quaternion> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DimensionError("QFunction has " + std::to_string(values_.size()) +
                         " values for a grid of " + std::to_string(grid_.size()) + " points");
  }
}

QFunction QFunction::constant(Grid grid, const Quaternion& q) {
  return QFunction(grid, std::vector<Quaternion>(grid.size(), q));
}

QFunction QFunction::sample(Grid grid, const std::function<Quaternion(double)>& f) {
  std::vector<Quaternion> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) v[k] = f(grid.node(k));
  return QFunction(grid, std::move(v));
}

QFunction& QFunction::operator+=(const QFunction& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

QFunction& QFunction::operator-=(const QFunction& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

QFunction& QFunction::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

double QFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) {
    m = std::fmax(m, std::fmax(std::fmax(std::fabs(v.x0), std::fabs(v.x1)),
                               std::fmax(std::fabs(v.x2), std::fabs(v.x3))));
  }
  return m;
}

QFunction operator+(QFunction a, const QFunction& b) { return a += b; }
QFunction operator-(QFunction a, const QFunction& b) { return a -= b; }
QFunction operator-(QFunction a) { return a *= -1.0; }
QFunction operator*(double s, QFunction f) { return f *= s; }
QFunction operator*(QFunction f, double s) { return f *= s; }

QFunction left_multiply(const QFunction& a, const QFunction& f) {
  require_same_grid(a.grid(), f.grid());
  QFunction out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = a[k] * f[k];
  return out;
}

QFunction left_multiply(const Quaternion& a, const QFunction& f) {
  QFunction out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = a * f[k];
  return out;
}

QFunction right_multiply(const QFunction& f, const Quaternion& b) {
  QFunction out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k] * b;
  return out;
}

QFunction right_multiply(const QFunction& f, const QFunction& b) {
  require_same_grid(f.grid(), b.grid());
  QFunction out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k] * b[k];
  return out;
}

QFunction conj(const QFunction& f) {
  QFunction out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = conj(f[k]);
  return out;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) {
    throw DimensionError("grid mismatch: " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + " points");
  }
}

double inner(const QFunction& f, const QFunction& g) {
  require_same_grid(f.grid(), g.grid());
  // Fixed left-to-right reduction keeps results bit-reproducible.
  double acc = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) acc += real_dot(f[k], g[k]);
  return acc * f.grid().spacing();
}

double norm(const QFunction& f) { return std::sqrt(inner(f, f)); }

double max_distance(const QFunction& f, const QFunction& g) {
  require_same_grid(f.grid(), g.grid());
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) m = std::fmax(m, abs(f[k] - g[k]));
  return m;
}

std::vector<std::vector<double>> gram_matrix(std::span<const QFunction> fs) {
  const std::size_t n = fs.size();
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      g[a][b] = inner(fs[a], fs[b]);
      g[b][a] = g[a][b];
    }
  }
  return g;
}

double orthonormality_defect(std::span<const QFunction> fs) {
  const auto g = gram_matrix(fs);
  double worst = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    for (std::size_t b = 0; b < g.size(); ++b) {
      worst = std::fmax(worst, std::fabs(g[a][b] - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

std::vector<QFunction> gram_schmidt(std::span<const QFunction> fs, GramSchmidtOptions opts) {
  std::vector<QFunction> out;
  out.reserve(fs.size());
  for (std::size_t a = 0; a < fs.size(); ++a) {
    const double original = norm(fs[a]);
    if (original == 0.0) {
      throw RankDeficiencyError("input " + std::to_string(a) + " is the zero function", a);
    }
    QFunction v = fs[a];
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : out) v -= inner(v, e) * e;
    }
    const double rest = norm(v);
    if (rest <= opts.dependence_tol * original) {
      throw RankDeficiencyError("input " + std::to_string(a) +
                                    " is linearly dependent on the preceding inputs",
                                a);
    }
    v *= 1.0 / rest;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<double> expand_in_basis(const QFunction& f, std::span<const QFunction> basis,
                                    ExpansionOptions opts) {
  if (opts.strict) {
    const double defect = orthonormality_defect(basis);
    if (defect > opts.orthonormality_tol) {
      throw ValidationError("basis is not orthonormal: Gram residual " + std::to_string(defect));
    }
  }
  std::vector<double> c(basis.size());
  for (std::size_t a = 0; a < basis.size(); ++a) c[a] = inner(f, basis[a]);
  return c;
}

QFunction combine(std::span<const double> coeffs, std::span<const QFunction> basis) {
  if (coeffs.size() != basis.size()) {
    throw DimensionError("coefficient count " + std::to_string(coeffs.size()) +
                         " does not match basis size " + std::to_string(basis.size()));
  }
  if (basis.empty()) throw DimensionError("cannot combine an empty basis");
  QFunction out(basis.front().grid());
  for (std::size_t a = 0; a < basis.size(); ++a) {
    require_same_grid(out.grid(), basis[a].grid());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += coeffs[a] * basis[a][k];
  }
  return out;
}

}  // namespace qqm
