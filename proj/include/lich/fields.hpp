#pragma once

// Discretized covariant tensor fields on the flat torus (Fourier collocation)
// and the round 2-sphere (pole-offset latitude–longitude grid).
//
// Torus: nodes x_a = i_a L_a / N_a, node index row-major over axes, frame ∂_{x_a}.
// Sphere: nodes θ_j = (j + ½)π/Nθ, φ_k = 2πk/Nφ (Nφ even), node = j·Nφ + k,
// components stored in the orthonormal frame (e_θ, e_φ).
// Field values are node-major; each node holds the n^p components of a
// CovariantTensor in row-major multi-index order.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "lich/model_space.hpp"
#include "lich/tensor.hpp"

namespace lich {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class FrameConvention { coordinate, orthonormal };

// Largest supported problems: torus ≤ 4096 nodes (16³, 64²), sphere ≤ 96×192.
inline constexpr std::size_t kMaxTorusNodes = 4096;
inline constexpr int kMaxSphereTheta = 96;
inline constexpr int kMaxSpherePhi = 192;

class Grid {
 public:
  // Resolution: torus one entry per axis (or a single entry for all axes);
  // sphere {Nθ, Nφ} (or {N} meaning N×2N). Unsupported → capability error.
  static std::shared_ptr<const Grid> make(const ModelSpace& space, std::vector<int> resolution);

  const ModelSpace& space() const noexcept { return space_; }
  bool is_torus() const noexcept { return torus_; }
  bool is_sphere() const noexcept { return !torus_; }
  int dim() const noexcept { return n_; }
  std::span<const int> resolution() const noexcept { return res_; }
  std::size_t node_count() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double volume() const noexcept;

  void node_multi_index(std::size_t node, std::span<int> out) const noexcept;
  // Torus: indices wrap periodically. Sphere: {j, k} with k wrapping.
  std::size_t node_at(std::span<const int> index) const noexcept;

  // Torus geometry.
  double period(int axis) const noexcept { return periods_[std::size_t(axis)]; }
  double coordinate(std::size_t node, int axis) const noexcept;
  // Sphere geometry.
  double radius() const noexcept { return radius_; }
  double theta(int j) const noexcept;
  double phi(int k) const noexcept;
  double dtheta() const noexcept;
  double dphi() const noexcept;

  std::string resolution_string() const;

 private:
  Grid() = default;
  ModelSpace space_ = ModelSpace::round_sphere_2(1.0);
  bool torus_ = false;
  int n_ = 2;
  std::vector<int> res_;
  std::vector<double> periods_;
  double radius_ = 1.0;
  std::size_t nodes_ = 0;
  std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

class TensorField {
 public:
  TensorField(GridPtr grid, int p, SymmetryClass cls = SymmetryClass::general);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  int order() const noexcept { return p_; }
  SymmetryClass symmetry() const noexcept { return cls_; }
  void set_symmetry(SymmetryClass cls) noexcept { cls_ = cls; }
  FrameConvention frame() const noexcept { return FrameConvention::orthonormal; }
  std::size_t fiber_size() const noexcept { return fiber_; }
  std::size_t node_count() const noexcept { return grid_->node_count(); }

  std::span<double> values() noexcept { return v_; }
  std::span<const double> values() const noexcept { return v_; }
  CovariantTensor at(std::size_t node) const;
  void set(std::size_t node, const CovariantTensor& t);

  // Quadrature inner product Σ_nodes w ⟨F, G⟩ and the induced norm.
  double inner(const TensorField& other) const;
  double norm() const;
  double max_abs() const noexcept;

  TensorField& operator+=(const TensorField& other);
  TensorField& operator-=(const TensorField& other);
  TensorField& operator*=(double s) noexcept;

 private:
  GridPtr grid_;
  int p_;
  SymmetryClass cls_;
  std::size_t fiber_;
  std::vector<double> v_;
};

// Node weights repeated once per fiber component (length nodes·fiber).
std::vector<double> expanded_weights(const Grid& grid, std::size_t fiber);

// Node-centered covariant derivative: rows (node, a, I) ↔ (∇_{e_a}T)_I, i.e. the
// (p+1)-tensor with the derivative slot first. Torus: Fourier collocation.
// Sphere: the face derivative of energy_derivative (differences between
// neighbouring nodes, with discrete parallel transport along latitudes)
// averaged back to the nodes with the face quadrature weights; the pole
// caps contribute no faces, so D* is the exact face divergence.
SparseMatrix node_derivative_matrix(const Grid& grid, int p);

TensorField covariant_derivative(const TensorField& f);
// D* = W⁻¹ Dᵀ W: the quadrature adjoint of covariant_derivative, a
// discretization of −Σ_i (∇_{e_i} G)(e_i, …).
TensorField adjoint_derivative(const TensorField& g);

// Pointwise operations.
TensorField trace_field(const TensorField& f);           // slots (0,1)
TensorField pointwise_norm_squared(const TensorField& f);  // p = 0 result
TensorField pointwise_inner(const TensorField& f, const TensorField& g);
TensorField project_field(const TensorField& f, SymmetryClass cls);
TensorField metric_field(const GridPtr& grid);
TensorField constant_field(const GridPtr& grid, const CovariantTensor& t);

struct RandomFieldOptions {
  int bandwidth = 3;          // torus: max |wavenumber| per axis; sphere: polynomial degree
  bool pole_vanishing = false;  // sphere: multiply by (x² + y²)², which vanishes to 4th order at the poles
};

// Smooth random field projected onto the class. Torus: random trigonometric
// polynomial; sphere: tangential part of an ambient tensor field with
// polynomial entries in (x, y, z). Deterministic for a given seed.
TensorField random_smooth_field(const GridPtr& grid, int p, SymmetryClass cls, std::uint64_t seed,
                                RandomFieldOptions options = {});

}  // namespace lich
