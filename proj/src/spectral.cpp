#include "qqm/spectral.hpp"

#include <cmath>
#include <sstream>

#include "qqm/errors.hpp"

namespace qqm {

SpectralResolution::SpectralResolution(Grid grid, std::vector<double> eigenvalues,
                                       std::vector<Eigen::MatrixXd> factors)
    : grid_(grid), eigenvalues_(std::move(eigenvalues)), factors_(std::move(factors)) {
  if (eigenvalues_.size() != factors_.size()) {
    throw DimensionError("one factor per eigenvalue required");
  }
}

std::vector<int> SpectralResolution::multiplicities() const {
  std::vector<int> m;
  m.reserve(factors_.size());
  for (const auto& q : factors_) m.push_back(static_cast<int>(q.cols()));
  return m;
}

const Eigen::MatrixXd& SpectralResolution::factor(std::size_t k) const {
  if (k >= factors_.size()) {
    throw IndexError("eigenspace index " + std::to_string(k) + " out of range (" +
                     std::to_string(factors_.size()) + " eigenspaces)");
  }
  return factors_[k];
}

QOperator SpectralResolution::projection(std::size_t k) const {
  const Eigen::MatrixXd& q = factor(k);
  return QOperator::from_matrix(grid_, q * q.transpose());
}

Eigen::MatrixXd SpectralResolution::reconstruct() const {
  const auto dim = static_cast<Eigen::Index>(4 * grid_.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    t.noalias() += eigenvalues_[k] * factors_[k] * factors_[k].transpose();
  }
  return t;
}

SpectralResolution decompose(const QOperator& op, DecomposeOptions opts) {
  const Eigen::MatrixXd& m = op.matrix();
  const double asym = (m - m.transpose()).norm();
  if (!(asym < opts.symmetry_tol)) {
    std::ostringstream msg;
    msg << "operator is not self-adjoint: ||T - T^dagger||_F = " << asym;
    throw ContractViolation(msg.str(), asym);
  }
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
  const Eigen::VectorXd& lambda = es.eigenvalues();  // ascending
  Eigen::MatrixXd vecs = es.eigenvectors();

  // First significant coordinate positive, for reproducible output.
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    const double scale = vecs.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
      if (std::fabs(vecs(r, c)) > 1e-8 * scale) {
        if (vecs(r, c) < 0.0) vecs.col(c) *= -1.0;
        break;
      }
    }
  }

  std::vector<double> values;
  std::vector<Eigen::MatrixXd> factors;
  Eigen::Index start = 0;
  const Eigen::Index n = lambda.size();
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && std::fabs(lambda(end) - lambda(end - 1)) <
                          opts.cluster_rel * std::fmax(1.0, std::fabs(lambda(end - 1)))) {
      ++end;
    }
    values.push_back(lambda.segment(start, end - start).mean());
    factors.push_back(vecs.middleCols(start, end - start));
    start = end;
  }
  return SpectralResolution(op.grid(), std::move(values), std::move(factors));
}

QFunction project(const SpectralResolution& res, std::size_t k, const QFunction& f) {
  require_same_grid(res.grid(), f.grid());
  const Eigen::MatrixXd& q = res.factor(k);
  return from_vector(f.grid(), q * (q.transpose() * to_vector(f)));
}

std::vector<QFunction> eigenfunctions(const SpectralResolution& res, std::size_t k) {
  const Eigen::MatrixXd& q = res.factor(k);
  std::vector<QFunction> out;
  // Columns are Euclidean-orthonormal; rescale to unit norm under the weighted inner product.
  const double s = 1.0 / std::sqrt(res.grid().spacing());
  for (Eigen::Index c = 0; c < q.cols(); ++c) out.push_back(s * from_vector(res.grid(), q.col(c)));
  return out;
}

}  // namespace qqm
