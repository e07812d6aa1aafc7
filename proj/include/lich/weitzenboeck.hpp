#pragma once

// The Weitzenböck curvature term ℜ_p of Δ_L = Δ̄ + c ℜ_p on covariant
// p-tensors, in component, commutator and eigenframe forms.

#include "lich/curvature.hpp"
#include "lich/tensor.hpp"

namespace lich {

// Normalization constant of Σ_α Λ_α ‖Ξ_α(T)‖² under the unit-norm Λ² basis.
// Fixed by the p = 1 space-form calibration (see calibrate_eigenframe_normalization).
inline constexpr double kEigenframeNormalization = 1.0;

// (ℜT)_{i_1…i_p} = Σ_a R_{i_a j} T_{…j…} − 2 Σ_{a<b} R_{j i_a k i_b} T_{…j…k…}.
CovariantTensor weitzenboeck_apply(const CurvatureData& c, const CovariantTensor& t);

// (ℜT)(X_1,…,X_p) = Σ_a Σ_j (R(e_j, X_a)·T)(X_1,…,e_j,…,X_p) with R(e_j,X_a)
// acting as a skew endomorphism.
CovariantTensor weitzenboeck_apply_commutator_form(const CurvatureData& c, const CovariantTensor& t);

double weitzenboeck_quadratic(const CurvatureData& c, const CovariantTensor& t);

// Σ_α Λ_α ‖Ξ_α(T)‖² over the eigenframe of the curvature operator.
double weitzenboeck_quadratic_eigenframe(const CurvatureData& c, const CovariantTensor& t);

// Ratio weitzenboeck_quadratic / Σ_α Λ_α ‖Ξ_α(T)‖² (unnormalized) for a unit
// 1-form on space_form(n, 1); the frozen constant above must equal it.
double calibrate_eigenframe_normalization(int n);

// (ℜ₂φ)_ij = R_ik φ_kj + R_jk φ_ki − 2 R_ikjl φ_kl for symmetric φ.
CovariantTensor r2_apply(const CurvatureData& c, const CovariantTensor& phi);

// 2 Σ_{i<j} sec(e_i∧e_j)(μ_i − μ_j)² in the eigenframe of φ.
double r2_quadratic_eigenframe(const CurvatureData& c, const CovariantTensor& phi);

// 2s/n: Δ_L(c=1) − Δ_E on Einstein spaces.
double einstein_shift(double s, int n);

// Matrix of T ↦ ℜ_p T on order-p component vectors (n^p × n^p).
Eigen::MatrixXd weitzenboeck_matrix(const CurvatureData& c, int p);

}  // namespace lich
