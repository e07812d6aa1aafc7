#include "lich/fields.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "discretization.hpp"
#include "lich/error.hpp"
#include "lich/kernels.hpp"
#include "lich/parallel.hpp"

namespace lich {

namespace detail {

std::vector<double> fourier_first_derivative(int n, double period) {
  std::vector<double> d(std::size_t(n), 0.0);
  const int kmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  for (int r = 1; r <= n / 2; ++r) {
    double s = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      const double kappa = 2.0 * std::numbers::pi * k / period;
      s += 2.0 * kappa * std::sin(2.0 * std::numbers::pi * k * r / n);
    }
    d[std::size_t(r)] = -s / n;
    if (n - r != r) d[std::size_t(n - r)] = s / n;  // exact antisymmetry
  }
  if (n % 2 == 0) d[std::size_t(n / 2)] = 0.0;
  return d;
}

std::vector<double> fourier_second_derivative(int n, double period) {
  std::vector<double> d(std::size_t(n), 0.0);
  const int kmax = (n % 2 == 0) ? n / 2 - 1 : (n - 1) / 2;
  double off_sum = 0.0;
  for (int r = 1; r <= n / 2; ++r) {
    double s = 0.0;
    for (int k = 1; k <= kmax; ++k) {
      const double kappa = 2.0 * std::numbers::pi * k / period;
      s -= 2.0 * kappa * kappa * std::cos(2.0 * std::numbers::pi * k * r / n);
    }
    if (n % 2 == 0) {
      const double kn = std::numbers::pi * n / period;
      s -= kn * kn * ((r % 2 == 0) ? 1.0 : -1.0);
    }
    d[std::size_t(r)] = s / n;
    d[std::size_t(n - r)] = s / n;
    off_sum += (n - r != r) ? 2.0 * s / n : s / n;
  }
  d[0] = -off_sum;  // constants are annihilated exactly
  return d;
}

Eigen::MatrixXd latitude_transport(double alpha, int p) {
  Eigen::MatrixXd q(2, 2);
  q << std::cos(alpha), std::sin(alpha), -std::sin(alpha), std::cos(alpha);
  return pullback_matrix(q, p);
}

}  // namespace detail

namespace {

void check_same_layout(const TensorField& a, const TensorField& b, const char* op) {
  if (a.grid_ptr() != b.grid_ptr() && (a.node_count() != b.node_count() || a.grid().dim() != b.grid().dim()))
    fail(ErrorKind::shape, std::string(op) + ": fields live on different grids");
  if (a.order() != b.order()) fail(ErrorKind::shape, std::string(op) + ": order mismatch");
}

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix torus_node_derivative(const Grid& g, int p) {
  const int n = g.dim();
  const std::size_t fib = ipow(n, p);
  const std::size_t nodes = g.node_count();
  Triplets trip;
  std::array<int, 3> idx{};
  std::array<int, 3> nb{};
  for (int a = 0; a < n; ++a) {
    const int na = g.resolution()[std::size_t(a)];
    const auto d1 = detail::fourier_first_derivative(na, g.period(a));
    for (std::size_t node = 0; node < nodes; ++node) {
      g.node_multi_index(node, {idx.data(), std::size_t(n)});
      for (int r = 1; r < na; ++r) {
        const double c = d1[std::size_t(r)];
        if (c == 0.0) continue;
        nb = idx;
        nb[std::size_t(a)] = idx[std::size_t(a)] - r;  // column j = i − r
        const std::size_t col_node = g.node_at({nb.data(), std::size_t(n)});
        for (std::size_t comp = 0; comp < fib; ++comp)
          trip.emplace_back(Eigen::Index(node * n * fib + std::size_t(a) * fib + comp),
                            Eigen::Index(col_node * fib + comp), c);
      }
    }
  }
  SparseMatrix d(Eigen::Index(nodes * n * fib), Eigen::Index(nodes * fib));
  d.setFromTriplets(trip.begin(), trip.end());
  return d;
}

void add_block(Triplets& trip, std::size_t row0, std::size_t col0, const Eigen::MatrixXd& m, double scale) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0.0) trip.emplace_back(Eigen::Index(row0 + std::size_t(r)), Eigen::Index(col0 + std::size_t(c)), scale * m(r, c));
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> v) {
  return {v.data(), Eigen::Index(v.size())};
}

// Node derivative on the sphere: face derivatives averaged back to the nodes
// with the face quadrature weights, D = W⁻¹ Jᵀ W_f D_f, where J averages node
// values onto faces (with transport along latitudes). Its weighted adjoint
// W⁻¹DᵀW = W⁻¹D_fᵀW_f J is then the face divergence of the averaged field,
// which needs no pole coupling because the pole faces carry zero weight.
SparseMatrix sphere_node_derivative(const Grid& g, int p) {
  const int nt = g.resolution()[0];
  const int np = g.resolution()[1];
  const std::size_t fib = ipow(2, p);
  const detail::FaceDerivative face = detail::sphere_face_derivative(g, p);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(Eigen::Index(fib), Eigen::Index(fib));
  const auto nw = g.weights();
  Triplets trip;
  for (int j = 0; j < nt; ++j) {
    const double half = 0.5 * std::cos(g.theta(j)) * g.dphi();
    const Eigen::MatrixXd from_east = detail::latitude_transport(half, p);
    const Eigen::MatrixXd from_west = detail::latitude_transport(-half, p);
    for (int k = 0; k < np; ++k) {
      const std::size_t node = std::size_t(j * np + k);
      const std::size_t row_t = node * 2 * fib;
      const std::size_t row_p = row_t + fib;
      const double w = nw[node];
      // Meridian faces j+½ (row index j·Nφ+k) and j−½.
      if (j + 1 < nt) {
        const std::size_t f = std::size_t(j * np + k) * fib;
        add_block(trip, row_t, f, id, 0.5 * face.weights(Eigen::Index(f)) / w);
      }
      if (j > 0) {
        const std::size_t f = std::size_t((j - 1) * np + k) * fib;
        add_block(trip, row_t, f, id, 0.5 * face.weights(Eigen::Index(f)) / w);
      }
      // Latitude faces k+½ and k−½ (equal weights), transported to the node.
      const std::size_t east = (face.theta_faces + std::size_t(j * np + k)) * fib;
      const std::size_t west = (face.theta_faces + std::size_t(j * np + (k + np - 1) % np)) * fib;
      add_block(trip, row_p, east, from_east, 0.5);
      add_block(trip, row_p, west, from_west, 0.5);
    }
  }
  SparseMatrix avg(Eigen::Index(g.node_count() * 2 * fib), face.d.rows());
  avg.setFromTriplets(trip.begin(), trip.end());
  return avg * face.d;
}

}  // namespace

namespace detail {

FaceDerivative sphere_face_derivative(const Grid& g, int p) {
  const int nt = g.resolution()[0];
  const int np = g.resolution()[1];
  const std::size_t fib = ipow(2, p);
  const double r = g.radius();
  const double dt = g.dtheta();
  const double dp = g.dphi();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(Eigen::Index(fib), Eigen::Index(fib));
  const std::size_t theta_faces = std::size_t(nt - 1) * std::size_t(np);
  const std::size_t phi_faces = std::size_t(nt) * std::size_t(np);
  const std::size_t rows = (theta_faces + phi_faces) * fib;
  Triplets trip;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(Eigen::Index(rows));
  // Meridian faces between rows j and j+1 (the pole faces carry zero weight and are omitted).
  for (int j = 0; j + 1 < nt; ++j) {
    const double wf = r * r * std::sin(0.5 * (g.theta(j) + g.theta(j + 1))) * dt * dp;
    for (int k = 0; k < np; ++k) {
      const std::size_t row = std::size_t(j * np + k) * fib;
      add_block(trip, row, std::size_t((j + 1) * np + k) * fib, id, 1.0 / (r * dt));
      add_block(trip, row, std::size_t(j * np + k) * fib, id, -1.0 / (r * dt));
      w.segment(Eigen::Index(row), Eigen::Index(fib)).setConstant(wf);
    }
  }
  // Latitude faces between columns k and k+1, both ends transported to the face midpoint.
  for (int j = 0; j < nt; ++j) {
    const double th = g.theta(j);
    const double half = 0.5 * std::cos(th) * dp;
    const Eigen::MatrixXd to_mid_from_right = latitude_transport(half, p);
    const Eigen::MatrixXd to_mid_from_left = latitude_transport(-half, p);
    const double scale = 1.0 / (r * std::sin(th) * dp);
    const double wf = r * r * std::sin(th) * dt * dp;
    for (int k = 0; k < np; ++k) {
      const std::size_t row = (theta_faces + std::size_t(j * np + k)) * fib;
      add_block(trip, row, std::size_t(j * np + (k + 1) % np) * fib, to_mid_from_right, scale);
      add_block(trip, row, std::size_t(j * np + k) * fib, to_mid_from_left, -scale);
      w.segment(Eigen::Index(row), Eigen::Index(fib)).setConstant(wf);
    }
  }
  SparseMatrix d(Eigen::Index(rows), Eigen::Index(g.node_count() * fib));
  d.setFromTriplets(trip.begin(), trip.end());
  return {std::move(d), std::move(w), theta_faces};
}

}  // namespace detail

TensorField::TensorField(GridPtr grid, int p, SymmetryClass cls)
    : grid_(std::move(grid)), p_(p), cls_(cls) {
  if (!grid_) fail(ErrorKind::shape, "TensorField requires a grid");
  if (p < 0 || p > kMaxOrder) fail(ErrorKind::order, "field order outside [0, 4]");
  fiber_ = ipow(grid_->dim(), p);
  v_.assign(grid_->node_count() * fiber_, 0.0);
}

CovariantTensor TensorField::at(std::size_t node) const {
  CovariantTensor t(grid_->dim(), p_);
  for (std::size_t i = 0; i < fiber_; ++i) t[i] = v_[node * fiber_ + i];
  return t;
}

void TensorField::set(std::size_t node, const CovariantTensor& t) {
  if (t.dim() != grid_->dim() || t.order() != p_) fail(ErrorKind::shape, "TensorField::set: shape mismatch");
  for (std::size_t i = 0; i < fiber_; ++i) v_[node * fiber_ + i] = t[i];
}

double TensorField::inner(const TensorField& other) const {
  check_same_layout(*this, other, "inner");
  const auto w = expanded_weights(*grid_, fiber_);
  return kernels::wdot(w.data(), v_.data(), other.v_.data(), v_.size());
}

double TensorField::norm() const { return std::sqrt(std::max(0.0, inner(*this))); }

double TensorField::max_abs() const noexcept {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

TensorField& TensorField::operator+=(const TensorField& other) {
  check_same_layout(*this, other, "operator+=");
  kernels::axpy(1.0, other.v_.data(), v_.data(), v_.size());
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& other) {
  check_same_layout(*this, other, "operator-=");
  kernels::axpy(-1.0, other.v_.data(), v_.data(), v_.size());
  return *this;
}

TensorField& TensorField::operator*=(double s) noexcept {
  for (double& x : v_) x *= s;
  return *this;
}

std::vector<double> expanded_weights(const Grid& grid, std::size_t fiber) {
  std::vector<double> w(grid.node_count() * fiber);
  const auto nw = grid.weights();
  for (std::size_t node = 0; node < grid.node_count(); ++node)
    std::fill_n(w.begin() + std::ptrdiff_t(node * fiber), fiber, nw[node]);
  return w;
}

SparseMatrix node_derivative_matrix(const Grid& grid, int p) {
  if (p < 0 || p + 1 > kMaxOrder) fail(ErrorKind::order, "covariant derivative needs p <= 3");
  return grid.is_torus() ? torus_node_derivative(grid, p) : sphere_node_derivative(grid, p);
}

TensorField covariant_derivative(const TensorField& f) {
  const SparseMatrix d = node_derivative_matrix(f.grid(), f.order());
  TensorField out(f.grid_ptr(), f.order() + 1);
  Eigen::Map<Eigen::VectorXd>(out.values().data(), Eigen::Index(out.values().size())) = d * as_vector(f.values());
  return out;
}

TensorField adjoint_derivative(const TensorField& g) {
  if (g.order() < 1) fail(ErrorKind::order, "adjoint_derivative needs an input of order >= 1");
  const int p = g.order() - 1;
  const SparseMatrix d = node_derivative_matrix(g.grid(), p);
  const auto w_in = expanded_weights(g.grid(), g.fiber_size());
  Eigen::VectorXd wg = as_vector(g.values()).cwiseProduct(as_vector(w_in));
  TensorField out(g.grid_ptr(), p);
  const auto w_out = expanded_weights(g.grid(), out.fiber_size());
  Eigen::Map<Eigen::VectorXd>(out.values().data(), Eigen::Index(out.values().size())) =
      (d.transpose() * wg).cwiseQuotient(as_vector(w_out));
  return out;
}

TensorField trace_field(const TensorField& f) {
  if (f.order() < 2) fail(ErrorKind::order, "trace_field needs p >= 2");
  TensorField out(f.grid_ptr(), f.order() - 2);
  for (std::size_t node = 0; node < f.node_count(); ++node) out.set(node, trace_g(f.at(node), 0, 1));
  return out;
}

TensorField pointwise_inner(const TensorField& f, const TensorField& g) {
  if (f.order() != g.order() || f.node_count() != g.node_count())
    fail(ErrorKind::shape, "pointwise_inner: layout mismatch");
  TensorField out(f.grid_ptr(), 0);
  const std::size_t fib = f.fiber_size();
  auto fv = f.values();
  auto gv = g.values();
  auto ov = out.values();
  parallel_for(f.node_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t node = b; node < e; ++node)
      ov[node] = kernels::dot(fv.data() + node * fib, gv.data() + node * fib, fib);
  });
  return out;
}

TensorField pointwise_norm_squared(const TensorField& f) { return pointwise_inner(f, f); }

TensorField project_field(const TensorField& f, SymmetryClass cls) {
  TensorField out(f.grid_ptr(), f.order(), cls);
  if (cls == SymmetryClass::general) {
    std::copy(f.values().begin(), f.values().end(), out.values().begin());
    return out;
  }
  const Eigen::MatrixXd& b = class_basis(f.grid().dim(), f.order(), cls);
  const Eigen::MatrixXd proj = b * b.transpose();
  std::vector<double> m(std::size_t(proj.size()));
  for (Eigen::Index r = 0; r < proj.rows(); ++r)
    for (Eigen::Index c = 0; c < proj.cols(); ++c) m[std::size_t(r * proj.cols() + c)] = proj(r, c);
  kernels::apply_blocks(m.data(), f.fiber_size(), f.values().data(), out.values().data(), f.node_count());
  return out;
}

TensorField constant_field(const GridPtr& grid, const CovariantTensor& t) {
  TensorField out(grid, t.order(), t.symmetry());
  for (std::size_t node = 0; node < grid->node_count(); ++node) out.set(node, t);
  return out;
}

TensorField metric_field(const GridPtr& grid) {
  return constant_field(grid, CovariantTensor::metric(grid->dim()));
}

TensorField random_smooth_field(const GridPtr& grid, int p, SymmetryClass cls, std::uint64_t seed,
                                RandomFieldOptions options) {
  const Grid& g = *grid;
  const int n = g.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  TensorField raw(grid, p);
  const std::size_t fib = raw.fiber_size();
  auto vals = raw.values();
  const int band = std::max(0, options.bandwidth);
  if (g.is_torus()) {
    // Σ_k a_k cos(2π k·x/L) + b_k sin(2π k·x/L) per component, |k_a| ≤ band.
    std::vector<std::array<int, 3>> modes;
    std::array<int, 3> k{};
    std::function<void(int)> enumerate = [&](int axis) {
      if (axis == n) {
        modes.push_back(k);
        return;
      }
      for (int v = -band; v <= band; ++v) {
        k[std::size_t(axis)] = v;
        enumerate(axis + 1);
      }
    };
    enumerate(0);
    const double amp = 1.0 / std::sqrt(double(modes.size()));
    for (std::size_t comp = 0; comp < fib; ++comp) {
      for (const auto& mode : modes) {
        const double a = amp * gauss(rng);
        const double b = amp * gauss(rng);
        for (std::size_t node = 0; node < g.node_count(); ++node) {
          double arg = 0.0;
          for (int ax = 0; ax < n; ++ax)
            arg += 2.0 * std::numbers::pi * mode[std::size_t(ax)] * g.coordinate(node, ax) / g.period(ax);
          vals[node * fib + comp] += a * std::cos(arg) + b * std::sin(arg);
        }
      }
    }
  } else {
    // Ambient tensor with polynomial entries in (x, y, z), restricted to the sphere.
    std::vector<std::array<int, 3>> monomials;
    for (int a = 0; a <= band; ++a)
      for (int b = 0; a + b <= band; ++b)
        for (int c = 0; a + b + c <= band; ++c) monomials.push_back({a, b, c});
    const std::size_t afib = ipow(3, p);
    Eigen::MatrixXd coef(Eigen::Index(afib), Eigen::Index(monomials.size()));
    for (Eigen::Index i = 0; i < coef.rows(); ++i)
      for (Eigen::Index m = 0; m < coef.cols(); ++m) coef(i, m) = gauss(rng);
    const int np = g.resolution()[1];
    std::array<int, kMaxOrder> aidx{};
    std::array<int, kMaxOrder> fidx{};
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      const double th = g.theta(int(node / std::size_t(np)));
      const double ph = g.phi(int(node % std::size_t(np)));
      const double x = std::sin(th) * std::cos(ph);
      const double y = std::sin(th) * std::sin(ph);
      const double z = std::cos(th);
      const double frame[2][3] = {{std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)},
                                  {-std::sin(ph), std::cos(ph), 0.0}};
      Eigen::VectorXd mono(Eigen::Index(monomials.size()));
      for (std::size_t m = 0; m < monomials.size(); ++m)
        mono(Eigen::Index(m)) = std::pow(x, monomials[m][0]) * std::pow(y, monomials[m][1]) * std::pow(z, monomials[m][2]);
      const Eigen::VectorXd amb = coef * mono;
      const double envelope = options.pole_vanishing ? std::pow(x * x + y * y, 2) : 1.0;
      for (std::size_t f = 0; f < fib; ++f) {
        std::size_t rem = f;
        for (int s = p - 1; s >= 0; --s) {
          fidx[std::size_t(s)] = int(rem % 2);
          rem /= 2;
        }
        double sum = 0.0;
        for (std::size_t ai = 0; ai < afib; ++ai) {
          std::size_t arem = ai;
          for (int s = p - 1; s >= 0; --s) {
            aidx[std::size_t(s)] = int(arem % 3);
            arem /= 3;
          }
          double prod = amb(Eigen::Index(ai));
          for (int s = 0; s < p; ++s) prod *= frame[fidx[std::size_t(s)]][aidx[std::size_t(s)]];
          sum += prod;
        }
        vals[node * fib + f] = envelope * sum;
      }
    }
  }
  return project_field(raw, cls);
}

}  // namespace lich
