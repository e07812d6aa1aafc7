#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lich/operators.hpp"

namespace lich {

struct SpectrumOptions {
  std::uint64_t seed = 0;
  std::optional<double> shift;        // default: just below zero
  int max_restarts = 80;
  std::size_t dense_threshold = 800;  // solve densely at or below this size
};

struct SpectralReport {
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;    // ‖A v − λ v‖ in the quadrature norm, ‖v‖ = 1
  int kernel_dim = 0;
  double kernel_tol = 0.0;
  std::vector<TensorField> kernel_basis;  // quadrature-orthonormal
  Eigen::MatrixXd vectors;  // reduced coordinates, one W-orthonormal column per eigenvalue
  double operator_norm = 0.0;  // norm bound used for tolerances
  double shift = 0.0;
  int restarts = 0;
  std::string method;
};

// k eigenvalues of A nearest the shift (the k smallest for semi-definite A),
// with residuals and the kernel (|λ| < kernel_tol). Default kernel_tol:
// torus 1e−8·max|λ| of the computed set; sphere 1e−3·λ₁ of the scalar
// operator at the same resolution. Non-convergence → solver error.
SpectralReport spectrum(const AssembledOperator& a, int k, std::optional<double> kernel_tol = std::nullopt,
                        const SpectrumOptions& options = {});

// First nonzero eigenvalue of the scalar rough Laplacian on the same grid.
double scalar_spectral_gap(const GridPtr& grid);

}  // namespace lich
