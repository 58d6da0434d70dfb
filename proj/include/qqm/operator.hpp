#pragma once

// Real-linear operators on grid functions.
//
// Real coordinates of a QFunction are stacked node by node,
// [x0, x1, x2, x3](node 0), [x0, x1, x2, x3](node 1), ... The quadrature
// weight is uniform, so the adjoint under the real inner product is the
// plain transpose of the matrix realization.

#include <functional>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

#include "qqm/hilbert.hpp"

namespace qqm {

enum class DerivativeScheme {
  Spectral,           ///< Fourier differentiation, exact for band-limited data
  CentralDifference,  ///< second order, kept for convergence studies
};

/// d/dx applied to every real component. The spectral version zeroes the
/// Nyquist mode on even grids.
QFunction derivative(const QFunction& f, DerivativeScheme scheme = DerivativeScheme::Spectral);
/// d²/dx²; the spectral multiplier is −k², including k = N/2.
QFunction second_derivative(const QFunction& f,
                            DerivativeScheme scheme = DerivativeScheme::Spectral);

Eigen::VectorXd to_vector(const QFunction& f);
QFunction from_vector(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& v);

class QOperator {
 public:
  using Action = std::function<QFunction(const QFunction&)>;

  QOperator(Grid grid, Action action);
  static QOperator from_matrix(Grid grid, Eigen::MatrixXd matrix);

  /// Throws DimensionError on grid mismatch.
  QFunction apply(const QFunction& f) const;
  QFunction operator()(const QFunction& f) const { return apply(f); }

  const Grid& grid() const noexcept { return state_->grid; }
  Eigen::Index dimension() const noexcept {
    return static_cast<Eigen::Index>(4 * state_->grid.size());
  }

  /// (4N)×(4N) realization, built once from unit impulses and shared by copies.
  const Eigen::MatrixXd& matrix() const;

 private:
  struct State {
    State(Grid g, Action a) : grid(g), action(std::move(a)) {}
    Grid grid;
    Action action;
    std::mutex mutex;  // guards the lazy build of `matrix`
    bool built = false;
    Eigen::MatrixXd matrix;
  };
  std::shared_ptr<State> state_;
};

QFunction apply(const QOperator& op, const QFunction& f);

QOperator identity_operator(const Grid& grid);
QOperator left_multiplication(const QFunction& a);
QOperator left_multiplication(const Grid& grid, const Quaternion& a);
QOperator right_multiplication(const Grid& grid, const Quaternion& b);
/// Multiplication by the node coordinate x.
QOperator position_operator(const Grid& grid);
QOperator derivative_operator(const Grid& grid,
                              DerivativeScheme scheme = DerivativeScheme::Spectral);

/// a ∘ b.
QOperator compose(const QOperator& a, const QOperator& b);
QOperator operator+(const QOperator& a, const QOperator& b);
QOperator operator-(const QOperator& a, const QOperator& b);
QOperator operator*(double s, const QOperator& a);

/// The unique S with <T f, g> = <f, S g>.
QOperator adjoint(const QOperator& op);

/// Frobenius norm of the difference of the realizations.
double operator_distance(const QOperator& a, const QOperator& b);
/// ‖T − T†‖_F.
double asymmetry(const QOperator& op);

}  // namespace qqm
