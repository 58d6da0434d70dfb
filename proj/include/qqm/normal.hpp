#pragma once

// Symplectic decomposition N = N0 + N1 j of a quaternionic matrix acting on
// H^n by left multiplication, (NΨ)_a = Σ_b (N0_ab + N1_ab j) Ψ_b.
//
// Under the real inner product the adjoint is N† = N0^H − N1^T j, and
//
//   [N, N†] = [N0, N0^H] + N1 N1^H − conj(N1^H N1)
//           + (N1 N0^T + N1^T conj(N0) − N0 N1^T − N0^H N1) j.
//
// For complex-symmetric N0, N1 this reduces to [N0, N0^H] = 0 together with
// [N0 + N0^H, N1] = 0. Without symmetry the two block conditions do not
// imply normality.

#include <Eigen/Dense>

namespace qqm {

struct NormalPair {
  Eigen::MatrixXcd n0;
  Eigen::MatrixXcd n1;
};

/// Real (4n)×(4n) matrix of Ψ ↦ NΨ in the stacked x0..x3 coordinates.
Eigen::MatrixXd realize(const NormalPair& pair);

/// Matrix representation of the adjoint pair (N0^H, −N1^T).
NormalPair adjoint(const NormalPair& pair);

struct NormalReport {
  double full_commutator;   ///< ‖[N, N†]‖_F from the real realization
  double n0_commutator;     ///< ‖[N0, N0^H]‖_F
  double mixed_commutator;  ///< ‖[N0 + N0^H, N1]‖_F
  /// Both block conditions hold within tol.
  bool block_conditions_hold(double tol) const {
    return n0_commutator < tol && mixed_commutator < tol;
  }
};

/// Throws DimensionError for non-square or mismatched blocks.
NormalReport normal_conditions(const NormalPair& pair);

}  // namespace qqm
