#pragma once

// Pointwise covariant tensors in an orthonormal frame (metric = identity).
// Components are stored densely, row-major in the multi-index (i_1, …, i_p):
// flat = Σ_a i_a n^(p−1−a). Slots are numbered from 0.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lich {

enum class SymmetryClass { general, symmetric, alternating, symmetric_traceless };

std::string_view to_string(SymmetryClass cls) noexcept;
// Accepts the enumerator names; unknown names → config error.
SymmetryClass parse_symmetry_class(std::string_view name);

inline constexpr int kMaxDim = 8;
inline constexpr int kMaxOrder = 4;

class CovariantTensor {
 public:
  // Zero 0-tensor on R^2.
  CovariantTensor() : CovariantTensor(2, 0) {}
  // Zero tensor of order p on R^n (class tag only; zero satisfies every class).
  CovariantTensor(int n, int p, SymmetryClass cls = SymmetryClass::general);

  // Components must have length n^p and satisfy the class invariants
  // (checked to 1e−12); violation → symmetry error.
  static CovariantTensor from_components(int n, int p, std::vector<double> components,
                                         SymmetryClass cls = SymmetryClass::general);
  static CovariantTensor metric(int n);
  static CovariantTensor scalar(int n, double value);
  // From an n×n matrix as a 2-tensor T_ij = m(i,j).
  static CovariantTensor from_matrix(const Eigen::MatrixXd& m,
                                     SymmetryClass cls = SymmetryClass::general);

  int dim() const noexcept { return n_; }
  int order() const noexcept { return p_; }
  SymmetryClass symmetry() const noexcept { return cls_; }
  std::size_t size() const noexcept { return c_.size(); }

  double operator[](std::size_t flat) const noexcept { return c_[flat]; }
  double& operator[](std::size_t flat) noexcept { return c_[flat]; }
  double at(std::span<const int> index) const;
  std::span<const double> components() const noexcept { return c_; }
  std::span<double> components() noexcept { return c_; }

  std::size_t flat_index(std::span<const int> index) const;
  void multi_index(std::size_t flat, std::span<int> out) const noexcept;

  // 2-tensor as an n×n matrix (p must be 2).
  Eigen::MatrixXd as_matrix() const;

  // Re-tags after checking the class invariants to `tol`.
  void set_symmetry(SymmetryClass cls, double tol = 1e-12);
  // Throws symmetry error if the stored class invariants fail by more than tol.
  void check_invariants(double tol = 1e-12) const;

  CovariantTensor& operator+=(const CovariantTensor& other);
  CovariantTensor& operator-=(const CovariantTensor& other);
  CovariantTensor& operator*=(double s) noexcept;
  friend CovariantTensor operator+(CovariantTensor a, const CovariantTensor& b) { return a += b; }
  friend CovariantTensor operator-(CovariantTensor a, const CovariantTensor& b) { return a -= b; }
  friend CovariantTensor operator*(double s, CovariantTensor a) { return a *= s; }

  double norm() const noexcept;
  double max_abs() const noexcept;

 private:
  int n_;
  int p_;
  SymmetryClass cls_;
  std::vector<double> c_;
};

// n×n antisymmetric matrix, viewed as a skew endomorphism of R^n.
class SkewEndomorphism {
 public:
  // Antisymmetry checked to 1e−12·max(1, ‖m‖); violation → symmetry error.
  explicit SkewEndomorphism(Eigen::MatrixXd m);
  // The 2-form ω with components ω_ij (i<j, lexicographic, unit-norm basis)
  // realized as A_ij = ω_ij, A_ji = −ω_ij.
  static SkewEndomorphism from_lambda2(int n, std::span<const double> omega);
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

 private:
  Eigen::MatrixXd m_;
};

std::size_t ipow(int n, int p) noexcept;

double inner_product(const CovariantTensor& t, const CovariantTensor& u);

// Contraction of slots a ≠ b with the metric; order p−2 (0-tensor for p = 2).
CovariantTensor trace_g(const CovariantTensor& t, int slot_a, int slot_b);

// Orthogonal projection onto the class subspace (S^p, Λ^p, S₀^p).
// Class validity: alternating needs p ≤ n; symmetric_traceless needs p ≥ 2.
CovariantTensor project_symmetry(const CovariantTensor& t, SymmetryClass cls);
bool class_valid(int n, int p, SymmetryClass cls) noexcept;

// (A·T)(X_1,…,X_p) = −Σ_a T(X_1,…,A X_a,…,X_p).
CovariantTensor skew_action(const SkewEndomorphism& a, const CovariantTensor& t);

// out_{…i_a…} = Σ_m m(m_row, i_a) T_{…m…} in the given slot.
CovariantTensor apply_to_slot(const CovariantTensor& t, int slot, const Eigen::MatrixXd& m);

// Pullback T(Q·, …, Q·) by a linear map Q of R^n.
CovariantTensor pullback(const Eigen::MatrixXd& q, const CovariantTensor& t);

// The n^p × n^p matrix of T ↦ pullback(Q, T) acting on component vectors.
Eigen::MatrixXd pullback_matrix(const Eigen::MatrixXd& q, int p);

// Matrix of a linear map on order-p tensors, obtained by applying it to the
// standard basis tensors.
template <class Map>
Eigen::MatrixXd linear_map_matrix(int n, int p, Map&& map) {
  const std::size_t dim = ipow(n, p);
  Eigen::MatrixXd out(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    CovariantTensor e(n, p);
    e[j] = 1.0;
    const CovariantTensor img = map(e);
    for (std::size_t i = 0; i < dim; ++i) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = img[i];
  }
  return out;
}

CovariantTensor tensor_product(const CovariantTensor& t, const CovariantTensor& u);

// Orthonormal basis (columns, n^p rows) of the class subspace. Deterministic;
// computed once per (n, p, class) and cached.
const Eigen::MatrixXd& class_basis(int n, int p, SymmetryClass cls);

}  // namespace lich
