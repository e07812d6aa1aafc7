#pragma once

// Pointwise curvature in an orthonormal frame. Conventions:
//   R_ijkl = R(e_i, e_j, e_k, e_l) with sec(e_i∧e_j) = R_ijij,
//   Ricci R_kl = Σ_i R_ikil, scalar s = Σ_k R_kk,
//   curvature operator R̄ on Λ² in the unit-norm lexicographic basis e_i∧e_j (i<j):
//     R̄_(ij),(kl) = R_ijkl,
//   curvature operator of the second kind on S²: (R̊φ)_ij = Σ_kl R_ikjl φ_kl,
//   represented in the orthonormal basis E_ii, (E_ij + E_ji)/√2 (i<j).

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lich {

// A diagonal block of constant sectional curvature `kappa` occupying frame
// indices [offset, offset + dim). Present when the tensor is known to be a
// product of constant-curvature factors.
struct CurvatureBlock {
  int offset;
  int dim;
  double kappa;
};

class CurvatureData {
 public:
  // Builds derived quantities from raw components (length n^4, row-major).
  // Block structure is optional metadata used by sec_extremes.
  static CurvatureData from_riemann(int n, std::vector<double> riemann,
                                    std::vector<CurvatureBlock> blocks = {});

  int dim() const noexcept { return n_; }
  double riemann(int i, int j, int k, int l) const noexcept {
    return r_[std::size_t(((i * n_ + j) * n_ + k) * n_ + l)];
  }
  std::span<const double> riemann_components() const noexcept { return r_; }
  const Eigen::MatrixXd& ricci() const noexcept { return ricci_; }
  double scalar() const noexcept { return scalar_; }
  const Eigen::MatrixXd& lambda2_matrix() const noexcept { return lambda2_; }
  const Eigen::MatrixXd& second_kind_matrix() const noexcept { return second_kind_; }
  std::span<const CurvatureBlock> blocks() const noexcept { return blocks_; }

  // Checks the algebraic symmetries, first Bianchi, Ricci contraction and
  // matrix symmetry to `tol`; violation → symmetry error.
  void validate(double tol = 1e-12) const;

  // R(e_k, e_l) as a skew endomorphism matrix: (R(e_k,e_l))_ij = R_ijkl.
  Eigen::MatrixXd curvature_endomorphism(int k, int l) const;

 private:
  int n_ = 0;
  std::vector<double> r_;
  Eigen::MatrixXd ricci_;
  double scalar_ = 0.0;
  Eigen::MatrixXd lambda2_;
  Eigen::MatrixXd second_kind_;
  std::vector<CurvatureBlock> blocks_;
};

// Λ² basis bookkeeping: lexicographic pairs (i<j).
std::vector<std::pair<int, int>> lambda2_pairs(int n);
// S² basis bookkeeping: pairs (i≤j), lexicographic; E_ii, (E_ij+E_ji)/√2.
std::vector<std::pair<int, int>> sym2_pairs(int n);
// n×n symmetric matrix ↔ coordinates in the orthonormal S² basis.
Eigen::VectorXd sym2_coordinates(const Eigen::MatrixXd& phi);
Eigen::MatrixXd sym2_matrix(int n, const Eigen::VectorXd& coords);

CurvatureData space_form_curvature(int n, double kappa);
// One-dimensional factor (zero curvature); only meaningful inside a product.
CurvatureData line_curvature();
CurvatureData product_curvature(std::span<const CurvatureData> factors);

Eigen::MatrixXd curvature_operator_matrix(const CurvatureData& c);
Eigen::MatrixXd second_kind_operator_matrix(const CurvatureData& c);

// R(X,Y,X,Y) / (|X|²|Y|² − ⟨X,Y⟩²); dependent X, Y → degenerate error.
double sectional_curvature(const CurvatureData& c, std::span<const double> x,
                           std::span<const double> y);

struct SecExtremes {
  double k_min;
  double k_max;
  bool exact;  // true when derived from block structure
};

// Exact for block-structured data; otherwise `budget` random planes refined by
// alternating eigen-steps on the Grassmannian until the value changes < 1e−10.
SecExtremes sec_extremes(const CurvatureData& c, int budget = 32, std::uint64_t seed = 0);

// Largest eigenvalue of R̊ restricted to trace-free symmetric 2-tensors.
double a0_estimate(const CurvatureData& c);

}  // namespace lich
