#pragma once

// Stencil building blocks shared by the field and operator code.

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lich {
class Grid;
}

namespace lich::detail {

// Periodic Fourier collocation on N points of period L, as circulant
// first-row data: (D f)_i = Σ_j d[(i − j) mod N] f_j.
// The first derivative drops the Nyquist mode; the second keeps it.
std::vector<double> fourier_first_derivative(int n, double period);
std::vector<double> fourier_second_derivative(int n, double period);

// Matrix on order-p components of discrete parallel transport along a
// latitude circle through angle Δφ·offset: T ↦ T(Q·,…,Q·) with Q the rotation
// by −α, α = cosθ·Δφ·offset, in the orthonormal frame (e_θ, e_φ).
Eigen::MatrixXd latitude_transport(double alpha, int p);

// Sphere face derivative: rows for the (Nθ−1)·Nφ meridian faces (∂ along e_θ
// between rows j and j+1) followed by the Nθ·Nφ latitude faces (∂ along e_φ
// between columns k and k+1, both ends transported to the face midpoint),
// each holding 2^p components, with the face quadrature weights.
struct FaceDerivative {
  Eigen::SparseMatrix<double> d;
  Eigen::VectorXd weights;
  std::size_t theta_faces = 0;
};
FaceDerivative sphere_face_derivative(const lich::Grid& g, int p);

}  // namespace lich::detail
