#include "qqm/operator.hpp"

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "qqm/errors.hpp"

namespace qqm {

namespace {

// Packs (x0 + i x1) and (x2 + i x3) into complex signals; the derivative
// multipliers are symmetric in k, so the packing commutes with them.
QFunction spectral_multiply(const QFunction& f, int order) {
  thread_local Eigen::FFT<double> fft;
  const std::size_t n = f.size();
  std::vector<std::complex<double>> a(n), b(n), fa, fb;
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = {f[k].x0, f[k].x1};
    b[k] = {f[k].x2, f[k].x3};
  }
  fft.fwd(fa, a);
  fft.fwd(fb, b);
  const bool even = n % 2 == 0;
  for (std::size_t k = 0; k < n; ++k) {
    const long long wave = k <= n / 2 ? static_cast<long long>(k)
                                      : static_cast<long long>(k) - static_cast<long long>(n);
    const double kk = static_cast<double>(wave);
    std::complex<double> mult;
    if (order == 1) {
      mult = (even && k == n / 2) ? 0.0 : std::complex<double>(0.0, kk);
    } else {
      mult = -kk * kk;
    }
    fa[k] *= mult;
    fb[k] *= mult;
  }
  fft.inv(a, fa);
  fft.inv(b, fb);
  QFunction out(f.grid());
  for (std::size_t k = 0; k < n; ++k) out[k] = {a[k].real(), a[k].imag(), b[k].real(), b[k].imag()};
  return out;
}

}  // namespace

QFunction derivative(const QFunction& f, DerivativeScheme scheme) {
  if (scheme == DerivativeScheme::Spectral) return spectral_multiply(f, 1);
  const std::size_t n = f.size();
  const double inv2h = 0.5 / f.grid().spacing();
  QFunction out(f.grid());
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = (f[(k + 1) % n] - f[(k + n - 1) % n]) * inv2h;
  }
  return out;
}

QFunction second_derivative(const QFunction& f, DerivativeScheme scheme) {
  if (scheme == DerivativeScheme::Spectral) return spectral_multiply(f, 2);
  const std::size_t n = f.size();
  const double h = f.grid().spacing();
  const double inv_h2 = 1.0 / (h * h);
  QFunction out(f.grid());
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = (f[(k + 1) % n] - 2.0 * f[k] + f[(k + n - 1) % n]) * inv_h2;
  }
  return out;
}

Eigen::VectorXd to_vector(const QFunction& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(4 * f.size()));
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(4 * k);
    v(i) = f[k].x0;
    v(i + 1) = f[k].x1;
    v(i + 2) = f[k].x2;
    v(i + 3) = f[k].x3;
  }
  return v;
}

QFunction from_vector(const Grid& grid, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != static_cast<Eigen::Index>(4 * grid.size())) {
    throw DimensionError("vector length " + std::to_string(v.size()) + " does not match 4x" +
                         std::to_string(grid.size()));
  }
  QFunction f(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(4 * k);
    f[k] = {v(i), v(i + 1), v(i + 2), v(i + 3)};
  }
  return f;
}

QOperator::QOperator(Grid grid, Action action)
    : state_(std::make_shared<State>(grid, std::move(action))) {}

QOperator QOperator::from_matrix(Grid grid, Eigen::MatrixXd matrix) {
  const auto dim = static_cast<Eigen::Index>(4 * grid.size());
  if (matrix.rows() != dim || matrix.cols() != dim) {
    throw DimensionError("operator matrix must be " + std::to_string(dim) + "x" +
                         std::to_string(dim));
  }
  auto shared = std::make_shared<const Eigen::MatrixXd>(std::move(matrix));
  QOperator op(grid, [grid, shared](const QFunction& f) {
    return from_vector(grid, (*shared) * to_vector(f));
  });
  op.state_->matrix = *shared;
  op.state_->built = true;
  return op;
}

QFunction QOperator::apply(const QFunction& f) const {
  require_same_grid(state_->grid, f.grid());
  return state_->action(f);
}

const Eigen::MatrixXd& QOperator::matrix() const {
  const std::lock_guard<std::mutex> lock(state_->mutex);
  if (!state_->built) {
    const Grid& grid = state_->grid;
    const auto dim = dimension();
    Eigen::MatrixXd m(dim, dim);
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
      unit(c) = 1.0;
      m.col(c) = to_vector(state_->action(from_vector(grid, unit)));
      unit(c) = 0.0;
    }
    state_->matrix = std::move(m);
    state_->built = true;
  }
  return state_->matrix;
}

QFunction apply(const QOperator& op, const QFunction& f) { return op.apply(f); }

QOperator identity_operator(const Grid& grid) {
  return QOperator(grid, [](const QFunction& f) { return f; });
}

QOperator left_multiplication(const QFunction& a) {
  return QOperator(a.grid(), [a](const QFunction& f) { return left_multiply(a, f); });
}

QOperator left_multiplication(const Grid& grid, const Quaternion& a) {
  return QOperator(grid, [a](const QFunction& f) { return left_multiply(a, f); });
}

QOperator right_multiplication(const Grid& grid, const Quaternion& b) {
  return QOperator(grid, [b](const QFunction& f) { return right_multiply(f, b); });
}

QOperator position_operator(const Grid& grid) {
  return QOperator(grid, [](const QFunction& f) {
    QFunction out(f.grid());
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = f.grid().node(k) * f[k];
    return out;
  });
}

QOperator derivative_operator(const Grid& grid, DerivativeScheme scheme) {
  return QOperator(grid, [scheme](const QFunction& f) { return derivative(f, scheme); });
}

QOperator compose(const QOperator& a, const QOperator& b) {
  require_same_grid(a.grid(), b.grid());
  return QOperator(a.grid(), [a, b](const QFunction& f) { return a.apply(b.apply(f)); });
}

QOperator operator+(const QOperator& a, const QOperator& b) {
  require_same_grid(a.grid(), b.grid());
  return QOperator(a.grid(), [a, b](const QFunction& f) { return a.apply(f) + b.apply(f); });
}

QOperator operator-(const QOperator& a, const QOperator& b) {
  require_same_grid(a.grid(), b.grid());
  return QOperator(a.grid(), [a, b](const QFunction& f) { return a.apply(f) - b.apply(f); });
}

QOperator operator*(double s, const QOperator& a) {
  return QOperator(a.grid(), [s, a](const QFunction& f) { return s * a.apply(f); });
}

QOperator adjoint(const QOperator& op) {
  return QOperator::from_matrix(op.grid(), op.matrix().transpose());
}

double operator_distance(const QOperator& a, const QOperator& b) {
  require_same_grid(a.grid(), b.grid());
  return (a.matrix() - b.matrix()).norm();
}

double asymmetry(const QOperator& op) {
  const auto& m = op.matrix();
  return (m - m.transpose()).norm();
}

}  // namespace qqm
