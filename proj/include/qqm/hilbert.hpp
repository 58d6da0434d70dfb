#pragma once

// Quaternion-valued functions on the periodic interval [0, 2π) and the real
// inner product <f, g> = ∫ Re[f conj(g)] dx, evaluated with the uniform
// trapezoidal rule (spectrally accurate for trigonometric integrands).

#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "qqm/quaternion.hpp"

namespace qqm {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform periodic grid x_k = k h, h = 2π / n, endpoint excluded.
class Grid {
 public:
  explicit Grid(std::size_t n_points);

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return kTwoPi / static_cast<double>(n_); }
  double node(std::size_t k) const noexcept { return static_cast<double>(k) * spacing(); }
  std::vector<double> nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
};

/// Sampled quaternion function; one value per grid node.
class QFunction {
 public:
  explicit QFunction(Grid grid);
  QFunction(Grid grid, std::vector<Quaternion> values);

  static QFunction constant(Grid grid, const Quaternion& q);
  static QFunction sample(Grid grid, const std::function<Quaternion(double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<Quaternion>& values() const noexcept { return values_; }
  std::span<const Quaternion> span() const noexcept { return values_; }

  const Quaternion& operator[](std::size_t k) const { return values_[k]; }
  Quaternion& operator[](std::size_t k) { return values_[k]; }

  /// Real Hilbert-space structure: addition and real scaling only.
  QFunction& operator+=(const QFunction& o);
  QFunction& operator-=(const QFunction& o);
  QFunction& operator*=(double s);

  /// Largest |component| over all nodes, used as a sup-norm.
  double max_abs() const;

 private:
  Grid grid_;
  std::vector<Quaternion> values_;
};

QFunction operator+(QFunction a, const QFunction& b);
QFunction operator-(QFunction a, const QFunction& b);
QFunction operator-(QFunction a);
QFunction operator*(double s, QFunction f);
QFunction operator*(QFunction f, double s);

// Pointwise quaternion products. These are function operations, not the
// vector-space scalar action.
QFunction left_multiply(const QFunction& a, const QFunction& f);
QFunction left_multiply(const Quaternion& a, const QFunction& f);
QFunction right_multiply(const QFunction& f, const Quaternion& b);
QFunction right_multiply(const QFunction& f, const QFunction& b);
QFunction conj(const QFunction& f);

void require_same_grid(const Grid& a, const Grid& b);

double inner(const QFunction& f, const QFunction& g);
double norm(const QFunction& f);

/// Largest nodewise |f - g|.
double max_distance(const QFunction& f, const QFunction& g);

/// Matrix of pairwise inner products.
std::vector<std::vector<double>> gram_matrix(std::span<const QFunction> fs);

/// Largest |G - I| entry of the Gram matrix of fs.
double orthonormality_defect(std::span<const QFunction> fs);

struct GramSchmidtOptions {
  /// Relative residual below which a vector counts as dependent on earlier ones.
  double dependence_tol = 1e-10;
};

/**
 * Orthonormalizes fs over the real scalars (modified Gram–Schmidt with one
 * reorthogonalization pass). Throws RankDeficiencyError naming the first
 * input that lies in the span of its predecessors.
 */
std::vector<QFunction> gram_schmidt(std::span<const QFunction> fs, GramSchmidtOptions opts = {});

struct ExpansionOptions {
  bool strict = true;          ///< validate orthonormality of the basis
  double orthonormality_tol = 1e-8;
};

/// Coefficients c_a = <f, basis_a> in an orthonormal basis.
std::vector<double> expand_in_basis(const QFunction& f, std::span<const QFunction> basis,
                                    ExpansionOptions opts = {});

/// Σ c_a basis_a.
QFunction combine(std::span<const double> coeffs, std::span<const QFunction> basis);

}  // namespace qqm
