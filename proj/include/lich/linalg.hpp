#pragma once

#include <Eigen/Dense>

namespace lich {

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // orthonormal columns, vectors.col(k) ↔ values(k)
};

// Eigen-decomposition of a real symmetric matrix (symmetry checked to 1e−10
// relative to max(1, ‖M‖); violation → symmetry error).
SymmetricEigen eigen_decompose_symmetric(const Eigen::MatrixXd& m);

// Orthonormal basis (columns) of the orthogonal complement of span(cols) in R^n.
// `cols` must have orthonormal columns.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& cols);

}  // namespace lich
