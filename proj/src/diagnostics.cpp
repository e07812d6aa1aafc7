#include "lich/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lich/error.hpp"
#include "lich/operators.hpp"
#include "lich/parallel.hpp"
#include "lich/weitzenboeck.hpp"

namespace lich {
namespace {

// Pointwise ℜ_p F on the full bundle.
TensorField weitzenboeck_field(const TensorField& f) {
  TensorField out(f.grid_ptr(), f.order());
  if (f.order() == 0) return out;
  const CurvatureData curv = f.grid().space().curvature();
  const Eigen::MatrixXd m = weitzenboeck_matrix(curv, f.order());
  const std::size_t fib = f.fiber_size();
  const auto in = f.values();
  auto dst = out.values();
  parallel_for(f.node_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      Eigen::Map<const Eigen::VectorXd> x(in.data() + node * fib, Eigen::Index(fib));
      Eigen::Map<Eigen::VectorXd> y(dst.data() + node * fib, Eigen::Index(fib));
      y = m * x;
    }
  });
  return out;
}

// Per-node ‖∇F‖² and ‖d‖F‖‖² from the node-centered derivative.
void gradient_norms(const TensorField& f, std::vector<double>& full, std::vector<double>& of_norm,
                    std::vector<double>& norm) {
  const TensorField d = covariant_derivative(f);
  const std::size_t fib = f.fiber_size();
  const int n = f.grid().dim();
  const std::size_t nodes = f.node_count();
  full.assign(nodes, 0.0);
  of_norm.assign(nodes, 0.0);
  norm.assign(nodes, 0.0);
  const auto fv = f.values();
  const auto dv = d.values();
  for (std::size_t node = 0; node < nodes; ++node) {
    const double* x = fv.data() + node * fib;
    double nn = 0.0;
    for (std::size_t i = 0; i < fib; ++i) nn += x[i] * x[i];
    norm[node] = std::sqrt(nn);
    for (int a = 0; a < n; ++a) {
      const double* da = dv.data() + (node * std::size_t(n) + std::size_t(a)) * fib;
      double sq = 0.0, proj = 0.0;
      for (std::size_t i = 0; i < fib; ++i) {
        sq += da[i] * da[i];
        proj += da[i] * x[i];
      }
      full[node] += sq;
      if (norm[node] > 0.0) of_norm[node] += proj * proj / nn;
    }
  }
}

}  // namespace

TensorField bochner_residual(const TensorField& f, double c) {
  const GridPtr& grid = f.grid_ptr();
  const int p = f.order();
  TensorField full(grid, p);
  std::copy(f.values().begin(), f.values().end(), full.values().begin());

  const AssembledOperator lich = assemble(grid, p, SymmetryClass::general, OperatorKind::lichnerowicz, c);
  const AssembledOperator scalar = assemble(grid, 0, SymmetryClass::general, OperatorKind::rough, 0.0);
  const TensorField lf = lich.apply(full);
  const TensorField rf = weitzenboeck_field(full);
  const TensorField sq = pointwise_norm_squared(full);
  TensorField beltrami = scalar.apply(sq);
  beltrami *= -1.0;

  std::vector<double> grad_sq, unused, norms;
  gradient_norms(full, grad_sq, unused, norms);

  TensorField out(grid, 0);
  const std::size_t fib = full.fiber_size();
  const auto fv = full.values();
  const auto lv = lf.values();
  const auto rv = rf.values();
  for (std::size_t node = 0; node < full.node_count(); ++node) {
    double gl = 0.0, gr = 0.0;
    for (std::size_t i = 0; i < fib; ++i) {
      gl += lv[node * fib + i] * fv[node * fib + i];
      gr += rv[node * fib + i] * fv[node * fib + i];
    }
    out.values()[node] = 0.5 * beltrami.values()[node] + gl - grad_sq[node] - c * gr;
  }
  return out;
}

double kato_gap(const TensorField& f) {
  std::vector<double> full, of_norm, norms;
  gradient_norms(f, full, of_norm, norms);
  double gap = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t node = 0; node < norms.size(); ++node) {
    if (norms[node] < 1e-10) continue;
    any = true;
    gap = std::min(gap, full[node] - of_norm[node]);
  }
  if (!any) fail(ErrorKind::degenerate, "kato_gap: field vanishes identically");
  return gap;
}

TTDiagnostics tt_check(const TensorField& f, double tol) {
  if (f.order() != 2 ||
      (f.symmetry() != SymmetryClass::symmetric && f.symmetry() != SymmetryClass::symmetric_traceless))
    fail(ErrorKind::shape, "tt_check: needs a symmetric 2-tensor field");
  TTDiagnostics d;
  d.tol = tol;
  d.divergence_norm = adjoint_derivative(f).norm();
  d.trace_norm = trace_field(f).norm();
  d.is_tt = d.divergence_norm < tol && d.trace_norm < tol;
  return d;
}

double trace_commutation_residual(const GridPtr& grid, std::uint64_t seed, int samples) {
  const AssembledOperator lich = assemble(grid, 2, SymmetryClass::symmetric, OperatorKind::lichnerowicz, 1.0);
  const AssembledOperator scalar = assemble(grid, 0, SymmetryClass::general, OperatorKind::rough, 0.0);
  RandomFieldOptions opts;
  if (grid->is_torus()) {
    int min_res = std::numeric_limits<int>::max();
    for (int r : grid->resolution()) min_res = std::min(min_res, r);
    opts.bandwidth = std::max(1, std::min(3, min_res / 2 - 1));
  }
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const TensorField phi = random_smooth_field(grid, 2, SymmetryClass::symmetric, seed + std::uint64_t(s), opts);
    TensorField lhs = trace_field(lich.apply(phi));
    const TensorField rhs = scalar.apply(trace_field(phi));
    lhs -= rhs;
    worst = std::max(worst, lhs.norm());
  }
  return worst;
}

double trace_commutation_residual(const ModelSpace& space, std::vector<int> resolution, std::uint64_t seed,
                                  int samples) {
  return trace_commutation_residual(Grid::make(space, std::move(resolution)), seed, samples);
}

}  // namespace lich
