#include "lich/linalg.hpp"

#include <algorithm>
#include <string>

#include "lich/error.hpp"

namespace lich {

SymmetricEigen eigen_decompose_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::shape, "eigen_decompose_symmetric: matrix not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    fail(ErrorKind::symmetry,
         "eigen_decompose_symmetric: matrix not symmetric (max |M - M^T| = " +
             std::to_string(asym) + ")");
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const Eigen::Index n = m.rows();
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order; reverse into descending.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = es.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& cols) {
  const Eigen::Index n = cols.rows();
  const Eigen::Index k = cols.cols();
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - cols * cols.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (proj + proj.transpose()));
  // The complement is the eigenspace of eigenvalue 1: the top n−k vectors.
  return es.eigenvectors().rightCols(n - k);
}

}  // namespace lich
