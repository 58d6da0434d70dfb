#pragma once

// Spectral resolution T = Σ λ_k P_k of self-adjoint operators under the real
// inner product. Eigenvalues are real by construction (symmetric solver).
// Each projection is stored as an orthonormal column factor Q_k, P_k = Q_k Q_kᵀ.

#include <vector>

#include <Eigen/Dense>

#include "qqm/operator.hpp"

namespace qqm {

struct DecomposeOptions {
  double symmetry_tol = 1e-8;  ///< ‖T − T†‖_F allowed before rejecting T
  double cluster_rel = 1e-8;   ///< merge when |λa − λb| < cluster_rel·max(1, |λa|)
};

class SpectralResolution {
 public:
  SpectralResolution(Grid grid, std::vector<double> eigenvalues,
                     std::vector<Eigen::MatrixXd> factors);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return eigenvalues_.size(); }
  /// Distinct eigenvalues, ascending.
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  std::vector<int> multiplicities() const;
  /// Orthonormal eigenbasis of the k-th eigenspace (one column per vector).
  const Eigen::MatrixXd& factor(std::size_t k) const;

  /// P_k as an operator.
  QOperator projection(std::size_t k) const;
  /// Σ λ_k P_k as a dense matrix.
  Eigen::MatrixXd reconstruct() const;

 private:
  Grid grid_;
  std::vector<double> eigenvalues_;
  std::vector<Eigen::MatrixXd> factors_;
};

/// Throws ContractViolation carrying ‖T − T†‖_F when T is not self-adjoint.
SpectralResolution decompose(const QOperator& op, DecomposeOptions opts = {});

/// P_k f. Throws IndexError for k out of range.
QFunction project(const SpectralResolution& res, std::size_t k, const QFunction& f);

/// Eigenfunctions of the k-th eigenspace as grid functions.
std::vector<QFunction> eigenfunctions(const SpectralResolution& res, std::size_t k);

}  // namespace qqm
