#pragma once

// Assembled Laplace-type operators A = Δ̄ + c ℜ_p on a symmetry class.
//
// The operator acts on reduced coordinates: per node, the coefficients of the
// field in the orthonormal basis of the class subspace (class_basis). It is
// stored as a symmetric stiffness matrix K = W·(Δ̄ + cℜ), the diagonal
// quadrature mass W and an identity shift, A = W⁻¹K − shift·Id, so A is
// self-adjoint for the quadrature inner product. Keeping the shift out of K
// lets operators that differ only by a multiple of the identity share K
// bit for bit.

#include <optional>
#include <string_view>

#include "lich/fields.hpp"

namespace lich {

enum class OperatorKind { rough, lichnerowicz, hodge, sampson, einstein };

std::string_view to_string(OperatorKind kind) noexcept;
OperatorKind parse_operator_kind(std::string_view name);

struct AssembledOperator {
  GridPtr grid;
  int p = 0;
  SymmetryClass cls = SymmetryClass::general;
  OperatorKind kind = OperatorKind::rough;
  double c = 0.0;      // Weitzenböck coupling actually used
  double shift = 0.0;  // subtracted multiple of the identity (Einstein kind)
  SparseMatrix stiffness;     // K of Δ̄ + cℜ, symmetric (shift not included)
  Eigen::VectorXd mass;       // W, expanded per reduced component
  Eigen::MatrixXd fiber_basis;  // n^p × f orthonormal columns

  std::size_t fiber_dim() const noexcept { return std::size_t(fiber_basis.cols()); }
  std::size_t size() const noexcept { return std::size_t(mass.size()); }
  // A = W⁻¹K − shift·Id as an explicit sparse matrix.
  SparseMatrix matrix() const;
  // K − shift·W, the symmetric stiffness of A.
  SparseMatrix shifted_stiffness() const;
  Eigen::VectorXd to_reduced(const TensorField& f) const;
  TensorField from_reduced(const Eigen::VectorXd& v) const;
  // A applied to a field (projected onto the class first).
  TensorField apply(const TensorField& f) const;
  // max_i Σ_j |A_ij|, an upper bound on the spectral radius.
  double norm_bound() const;
};

// Kind presets: hodge → alternating class with c = 1; sampson → symmetric
// class with c = −1; einstein → symmetric class, c = 1, minus 2s/n (requires
// an Einstein space); rough → c = 0. For lichnerowicz, `c` and `cls` are used
// as given. Limits: p ≤ 2 (capability error otherwise).
AssembledOperator assemble(const GridPtr& grid, int p, SymmetryClass cls, OperatorKind kind, double c = 1.0);
AssembledOperator assemble(const ModelSpace& space, int p, SymmetryClass cls, OperatorKind kind, double c,
                           std::vector<int> resolution);

// Rough Laplacian stiffness on full order-p components (n^p per node).
// Torus: −Σ_a ∂_a² by Fourier collocation. Sphere: Dᶠᵀ Wᶠ Dᶠ with the
// face-based derivative below.
SparseMatrix rough_stiffness(const Grid& grid, int p);

// Face-based derivative that defines the sphere rough Laplacian: one row block
// per meridian face (between latitude rows) and per latitude face (between
// longitude columns, with discrete parallel transport). Torus: the node
// derivative. `weights` holds the quadrature weight of every row.
struct EnergyDerivative {
  SparseMatrix d;
  Eigen::VectorXd weights;
};
EnergyDerivative energy_derivative(const Grid& grid, int p);

}  // namespace lich
