#include "lich/operators.hpp"

#include <array>
#include <cmath>
#include <string>

#include "discretization.hpp"
#include "lich/error.hpp"
#include "lich/weitzenboeck.hpp"

namespace lich {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;


SparseMatrix torus_rough_stiffness(const Grid& g, int p) {
  const int n = g.dim();
  const std::size_t fib = ipow(n, p);
  const std::size_t nodes = g.node_count();
  const double w = g.weights()[0];
  Triplets trip;
  std::array<int, 3> idx{};
  std::array<int, 3> nb{};
  for (int a = 0; a < n; ++a) {
    const int na = g.resolution()[std::size_t(a)];
    const auto d2 = detail::fourier_second_derivative(na, g.period(a));
    for (std::size_t node = 0; node < nodes; ++node) {
      g.node_multi_index(node, {idx.data(), std::size_t(n)});
      for (int r = 0; r < na; ++r) {
        nb = idx;
        nb[std::size_t(a)] = idx[std::size_t(a)] - r;
        const std::size_t col = g.node_at({nb.data(), std::size_t(n)});
        for (std::size_t comp = 0; comp < fib; ++comp)
          trip.emplace_back(Eigen::Index(node * fib + comp), Eigen::Index(col * fib + comp), -w * d2[std::size_t(r)]);
      }
    }
  }
  SparseMatrix k(Eigen::Index(nodes * fib), Eigen::Index(nodes * fib));
  k.setFromTriplets(trip.begin(), trip.end());
  return k;
}

SparseMatrix block_diagonal(const Eigen::MatrixXd& block, std::size_t count, const std::vector<double>* scale = nullptr) {
  Triplets trip;
  trip.reserve(count * std::size_t(block.size()));
  for (std::size_t b = 0; b < count; ++b) {
    const double s = scale ? (*scale)[b] : 1.0;
    for (Eigen::Index r = 0; r < block.rows(); ++r)
      for (Eigen::Index c = 0; c < block.cols(); ++c)
        if (block(r, c) != 0.0)
          trip.emplace_back(Eigen::Index(b * std::size_t(block.rows()) + std::size_t(r)),
                            Eigen::Index(b * std::size_t(block.cols()) + std::size_t(c)), s * block(r, c));
  }
  SparseMatrix m(Eigen::Index(count * std::size_t(block.rows())), Eigen::Index(count * std::size_t(block.cols())));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix identity(Eigen::Index n) {
  SparseMatrix id(n, n);
  id.setIdentity();
  return id;
}

}  // namespace

std::string_view to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::rough: return "rough";
    case OperatorKind::lichnerowicz: return "lichnerowicz";
    case OperatorKind::hodge: return "hodge";
    case OperatorKind::sampson: return "sampson";
    case OperatorKind::einstein: return "einstein";
  }
  return "rough";
}

OperatorKind parse_operator_kind(std::string_view name) {
  if (name == "rough") return OperatorKind::rough;
  if (name == "lichnerowicz") return OperatorKind::lichnerowicz;
  if (name == "hodge") return OperatorKind::hodge;
  if (name == "sampson") return OperatorKind::sampson;
  if (name == "einstein") return OperatorKind::einstein;
  fail(ErrorKind::config, "unknown operator kind '" + std::string(name) + "'");
}

SparseMatrix rough_stiffness(const Grid& grid, int p) {
  if (grid.is_torus()) return torus_rough_stiffness(grid, p);
  const detail::FaceDerivative e = detail::sphere_face_derivative(grid, p);
  SparseMatrix k = e.d.transpose() * e.weights.asDiagonal() * e.d;
  // Symmetrize away roundoff so that factorizations see an exactly symmetric matrix.
  SparseMatrix kt = k.transpose();
  return 0.5 * (k + kt);
}

EnergyDerivative energy_derivative(const Grid& grid, int p) {
  if (grid.is_sphere()) {
    detail::FaceDerivative e = detail::sphere_face_derivative(grid, p);
    return {std::move(e.d), std::move(e.weights)};
  }
  SparseMatrix d = node_derivative_matrix(grid, p);
  const auto w = expanded_weights(grid, ipow(grid.dim(), p + 1));
  return {std::move(d), Eigen::Map<const Eigen::VectorXd>(w.data(), Eigen::Index(w.size()))};
}

AssembledOperator assemble(const GridPtr& grid, int p, SymmetryClass cls, OperatorKind kind, double c) {
  if (!grid) fail(ErrorKind::shape, "assemble requires a grid");
  if (p < 0 || p > 2) fail(ErrorKind::capability, "operators are assembled for p <= 2 only");
  const ModelSpace& space = grid->space();
  const int n = grid->dim();
  AssembledOperator op;
  op.grid = grid;
  op.p = p;
  op.kind = kind;
  switch (kind) {
    case OperatorKind::rough: op.cls = cls; op.c = 0.0; break;
    case OperatorKind::lichnerowicz: op.cls = cls; op.c = c; break;
    case OperatorKind::hodge: op.cls = SymmetryClass::alternating; op.c = 1.0; break;
    case OperatorKind::sampson: op.cls = SymmetryClass::symmetric; op.c = -1.0; break;
    case OperatorKind::einstein: {
      if (!space.einstein())
        fail(ErrorKind::capability, "einstein operator requires an Einstein space");
      if (p != 2) fail(ErrorKind::capability, "einstein operator acts on symmetric 2-tensors");
      op.cls = SymmetryClass::symmetric;
      op.c = 1.0;
      break;
    }
  }
  if (!class_valid(n, p, op.cls))
    fail(ErrorKind::capability, std::string("class ") + std::string(to_string(op.cls)) +
                                    " is not valid for p=" + std::to_string(p) + " on dimension " + std::to_string(n));
  const CurvatureData curv = space.curvature();
  if (kind == OperatorKind::einstein) op.shift = einstein_shift(curv.scalar(), n);

  op.fiber_basis = class_basis(n, p, op.cls);
  const std::size_t nodes = grid->node_count();
  const std::size_t f = op.fiber_dim();

  SparseMatrix k_full = rough_stiffness(*grid, p);
  if (op.c != 0.0 && p > 0) {
    // Curvature is homogeneous in the orthonormal frame: one block per node, weighted.
    const Eigen::MatrixXd rp = weitzenboeck_matrix(curv, p);
    Eigen::MatrixXd sym = 0.5 * (rp + rp.transpose());
    std::vector<double> w(grid->weights().begin(), grid->weights().end());
    k_full += op.c * block_diagonal(sym, nodes, &w);
  }
  const SparseMatrix b = block_diagonal(op.fiber_basis, nodes);
  SparseMatrix k = b.transpose() * k_full * b;
  op.mass.resize(Eigen::Index(nodes * f));
  for (std::size_t node = 0; node < nodes; ++node)
    op.mass.segment(Eigen::Index(node * f), Eigen::Index(f)).setConstant(grid->weights()[node]);
  SparseMatrix kt = k.transpose();
  op.stiffness = 0.5 * (k + kt);
  op.stiffness.prune(0.0);
  op.stiffness.makeCompressed();
  return op;
}

AssembledOperator assemble(const ModelSpace& space, int p, SymmetryClass cls, OperatorKind kind, double c,
                           std::vector<int> resolution) {
  return assemble(Grid::make(space, std::move(resolution)), p, cls, kind, c);
}

SparseMatrix AssembledOperator::matrix() const {
  SparseMatrix a = mass.cwiseInverse().asDiagonal() * stiffness;
  if (shift == 0.0) return a;
  SparseMatrix id(a.rows(), a.cols());
  id.setIdentity();
  return a - shift * id;
}

SparseMatrix AssembledOperator::shifted_stiffness() const {
  if (shift == 0.0) return stiffness;
  return stiffness - SparseMatrix((shift * mass).asDiagonal() * identity(stiffness.rows()));
}

Eigen::VectorXd AssembledOperator::to_reduced(const TensorField& f) const {
  if (f.order() != p || f.node_count() != grid->node_count())
    fail(ErrorKind::shape, "field does not match the operator layout");
  const std::size_t nodes = grid->node_count();
  const std::size_t fib = f.fiber_size();
  const std::size_t fd = fiber_dim();
  Eigen::VectorXd out(Eigen::Index(nodes * fd));
  for (std::size_t node = 0; node < nodes; ++node) {
    Eigen::Map<const Eigen::VectorXd> v(f.values().data() + node * fib, Eigen::Index(fib));
    out.segment(Eigen::Index(node * fd), Eigen::Index(fd)) = fiber_basis.transpose() * v;
  }
  return out;
}

TensorField AssembledOperator::from_reduced(const Eigen::VectorXd& v) const {
  if (std::size_t(v.size()) != size()) fail(ErrorKind::shape, "reduced vector has the wrong length");
  TensorField out(grid, p, cls);
  const std::size_t nodes = grid->node_count();
  const std::size_t fib = out.fiber_size();
  const std::size_t fd = fiber_dim();
  for (std::size_t node = 0; node < nodes; ++node) {
    Eigen::Map<Eigen::VectorXd> dst(out.values().data() + node * fib, Eigen::Index(fib));
    dst = fiber_basis * v.segment(Eigen::Index(node * fd), Eigen::Index(fd));
  }
  return out;
}

TensorField AssembledOperator::apply(const TensorField& f) const {
  const Eigen::VectorXd x = to_reduced(f);
  const Eigen::VectorXd y = (stiffness * x).cwiseQuotient(mass) - shift * x;
  return from_reduced(y);
}

double AssembledOperator::norm_bound() const {
  const SparseMatrix k = shifted_stiffness();
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(k.rows());
  for (Eigen::Index col = 0; col < k.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(k, col); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.cwiseQuotient(mass).maxCoeff();
}

}  // namespace lich
