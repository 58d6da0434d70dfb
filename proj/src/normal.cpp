#include "qqm/normal.hpp"

#include <string>

#include "qqm/errors.hpp"
#include "qqm/quaternion.hpp"

namespace qqm {

namespace {

void check_blocks(const NormalPair& p) {
  if (p.n0.rows() != p.n0.cols() || p.n1.rows() != p.n1.cols() || p.n0.rows() != p.n1.rows()) {
    throw DimensionError("normal pair blocks must be square and of equal size");
  }
}

}  // namespace

Eigen::MatrixXd realize(const NormalPair& pair) {
  check_blocks(pair);
  const Eigen::Index n = pair.n0.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  const Quaternion units[4] = {Quaternion::one(), Quaternion::i(), Quaternion::j(),
                               Quaternion::k()};
  for (Eigen::Index b = 0; b < n; ++b) {
    for (int c = 0; c < 4; ++c) {
      const Quaternion psi = units[c];
      const Quaternion j_psi = Quaternion::j() * psi;
      for (Eigen::Index a = 0; a < n; ++a) {
        const Quaternion out = Quaternion::from_complex(pair.n0(a, b)) * psi +
                               Quaternion::from_complex(pair.n1(a, b)) * j_psi;
        for (int r = 0; r < 4; ++r) m(4 * a + r, 4 * b + c) = out[r];
      }
    }
  }
  return m;
}

NormalPair adjoint(const NormalPair& pair) {
  check_blocks(pair);
  return {pair.n0.adjoint(), -pair.n1.transpose()};
}

NormalReport normal_conditions(const NormalPair& pair) {
  check_blocks(pair);
  const Eigen::MatrixXd r = realize(pair);
  const Eigen::MatrixXd rt = r.transpose();
  NormalReport rep{};
  rep.full_commutator = (r * rt - rt * r).norm();
  const Eigen::MatrixXcd n0h = pair.n0.adjoint();
  rep.n0_commutator = (pair.n0 * n0h - n0h * pair.n0).norm();
  const Eigen::MatrixXcd s = pair.n0 + n0h;
  rep.mixed_commutator = (s * pair.n1 - pair.n1 * s).norm();
  return rep;
}

}  // namespace qqm
