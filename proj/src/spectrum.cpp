#include "lich/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "lich/error.hpp"
#include "lich/kernels.hpp"

namespace lich {
namespace {

// Solves (K − σW) x = b with a sparse LDLᵀ factorization, falling back to LU
// when the pivots break down (indefinite shifted operators).
class ShiftedSolver {
 public:
  ShiftedSolver(const SparseMatrix& k, const Eigen::VectorXd& w, double sigma) {
    SparseMatrix m = k;
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.coeffRef(i, i) -= sigma * w(i);
    m.makeCompressed();
    ldlt_.compute(m);
    if (ldlt_.info() == Eigen::Success) {
      Eigen::VectorXd probe = Eigen::VectorXd::Ones(m.rows());
      const Eigen::VectorXd x = ldlt_.solve(probe);
      if (x.allFinite() && (m * x - probe).norm() < 1e-6 * probe.norm() * std::max(1.0, x.norm())) {
        use_lu_ = false;
        return;
      }
    }
    lu_.analyzePattern(m);
    lu_.factorize(m);
    if (lu_.info() != Eigen::Success)
      fail(ErrorKind::solver, "shift-invert factorization failed (shift coincides with an eigenvalue?)");
    use_lu_ = true;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    if (use_lu_) return lu_.solve(b);
    return ldlt_.solve(b);
  }
  const char* name() const { return use_lu_ ? "LU" : "LDLT"; }

 private:
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  mutable Eigen::SparseLU<SparseMatrix> lu_;
  bool use_lu_ = false;
};

double wdot(const Eigen::VectorXd& w, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return kernels::wdot(w.data(), x.data(), y.data(), std::size_t(x.size()));
}

// W-orthonormalizes `block` against the accepted columns of q (twice, classical
// Gram–Schmidt) and within itself; appends surviving columns to q.
void extend_basis(Eigen::MatrixXd& q, Eigen::Index& used, Eigen::MatrixXd block, const Eigen::VectorXd& w) {
  for (Eigen::Index c = 0; c < block.cols(); ++c) {
    Eigen::VectorXd v = block.col(c);
    const double before = std::sqrt(std::max(0.0, wdot(w, v, v)));
    if (before == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < used; ++j) {
        const Eigen::VectorXd qj = q.col(j);
        const double h = wdot(w, qj, v);
        kernels::axpy(-h, qj.data(), v.data(), std::size_t(v.size()));
      }
    const double after = std::sqrt(std::max(0.0, wdot(w, v, v)));
    if (after <= 1e-10 * before || used >= q.cols()) continue;
    q.col(used++) = v / after;
  }
}

struct RitzResult {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  std::vector<double> residuals;
};

std::vector<double> residual_norms(const SparseMatrix& k, const Eigen::VectorXd& w, const Eigen::MatrixXd& v,
                                   const std::vector<double>& lambda) {
  std::vector<double> out(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const Eigen::VectorXd x = v.col(Eigen::Index(i));
    const Eigen::VectorXd r = (k * x).cwiseQuotient(w) - lambda[i] * x;
    out[i] = std::sqrt(std::max(0.0, wdot(w, r, r)));
  }
  return out;
}

// Orders Ritz pairs by distance to σ, keeps the first k, then sorts those ascending.
RitzResult select(const Eigen::VectorXd& theta, const Eigen::MatrixXd& vecs, double sigma, std::size_t k) {
  std::vector<Eigen::Index> order(std::size_t(theta.size()));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(theta(a) - sigma) < std::abs(theta(b) - sigma);
  });
  order.resize(std::min<std::size_t>(k, order.size()));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return theta(a) < theta(b); });
  RitzResult r;
  r.vectors.resize(vecs.rows(), Eigen::Index(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    r.values.push_back(theta(order[i]));
    r.vectors.col(Eigen::Index(i)) = vecs.col(order[i]);
  }
  return r;
}

RitzResult dense_solve(const SparseMatrix& stiffness, const Eigen::VectorXd& mass, double sigma, std::size_t k) {
  const Eigen::VectorXd winv_sqrt = mass.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd kd = Eigen::MatrixXd(stiffness);
  Eigen::MatrixXd s = winv_sqrt.asDiagonal() * kd * winv_sqrt.asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const Eigen::MatrixXd vecs = winv_sqrt.asDiagonal() * es.eigenvectors();
  RitzResult r = select(es.eigenvalues(), vecs, sigma, k);
  r.residuals = residual_norms(stiffness, mass, r.vectors, r.values);
  return r;
}

}  // namespace

SpectralReport spectrum(const AssembledOperator& a, int k, std::optional<double> kernel_tol,
                        const SpectrumOptions& options) {
  const std::size_t n = a.size();
  if (k < 1 || std::size_t(k) >= n)
    fail(ErrorKind::shape, "spectrum: need 1 <= k < dimension (" + std::to_string(n) + ")");
  SpectralReport rep;
  const SparseMatrix stiffness = a.shifted_stiffness();
  rep.operator_norm = a.norm_bound();
  const double scale = std::max(rep.operator_norm, 1e-300);
  rep.shift = options.shift.value_or(-std::max(1e-8 * scale, 1e-12));
  const double target = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  const double acceptable = 1e-7 * scale;

  RitzResult best;
  if (n <= options.dense_threshold) {
    best = dense_solve(stiffness, a.mass, rep.shift, std::size_t(k));
    rep.method = "dense";
  } else {
    const ShiftedSolver solver(stiffness, a.mass, rep.shift);
    rep.method = std::string("block shift-invert Krylov (") + solver.name() + ")";
    const Eigen::Index b = Eigen::Index(std::min<std::size_t>(n, 2 * std::size_t(k) + 8));
    const int blocks_per_cycle = 4;
    const Eigen::Index cap = std::min<Eigen::Index>(Eigen::Index(n), b * blocks_per_cycle);
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd x(Eigen::Index(n), b);
    for (Eigen::Index j = 0; j < b; ++j)
      for (Eigen::Index i = 0; i < Eigen::Index(n); ++i) x(i, j) = gauss(rng);
    double last_worst = std::numeric_limits<double>::infinity();
    int stalls = 0;
    for (int cycle = 0; cycle < options.max_restarts; ++cycle) {
      rep.restarts = cycle + 1;
      // Every basis vector passes through at least one solve, which damps the
      // high-frequency content that would otherwise dominate the residuals.
      Eigen::MatrixXd q(Eigen::Index(n), cap);
      Eigen::Index used = 0;
      Eigen::MatrixXd first(Eigen::Index(n), x.cols());
      for (Eigen::Index j = 0; j < x.cols(); ++j) first.col(j) = solver.solve(a.mass.cwiseProduct(x.col(j)));
      extend_basis(q, used, first, a.mass);
      Eigen::Index start = 0;
      for (int blk = 1; blk < blocks_per_cycle && used < cap; ++blk) {
        const Eigen::Index end = used;
        Eigen::MatrixXd next(Eigen::Index(n), end - start);
        for (Eigen::Index j = start; j < end; ++j)
          next.col(j - start) = solver.solve(a.mass.cwiseProduct(q.col(j)));
        start = end;
        extend_basis(q, used, next, a.mass);
      }
      const Eigen::MatrixXd qb = q.leftCols(used);
      Eigen::MatrixXd h = qb.transpose() * (stiffness * qb);
      h = 0.5 * (h + h.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
      const Eigen::MatrixXd ritz = qb * es.eigenvectors();
      RitzResult cur = select(es.eigenvalues(), ritz, rep.shift, std::size_t(k));
      cur.residuals = residual_norms(stiffness, a.mass, cur.vectors, cur.values);
      const double worst = *std::max_element(cur.residuals.begin(), cur.residuals.end());
      best = std::move(cur);
      if (worst <= target) break;
      stalls = (worst > 0.5 * last_worst) ? stalls + 1 : 0;
      last_worst = std::min(last_worst, worst);
      if (stalls >= 4 && worst <= acceptable) break;
      // Restart from the b Ritz vectors nearest the shift.
      const RitzResult restart = select(es.eigenvalues(), ritz, rep.shift, std::size_t(b));
      x = restart.vectors;
    }
  }
  const double worst = best.residuals.empty() ? 0.0 : *std::max_element(best.residuals.begin(), best.residuals.end());
  if (!(worst <= acceptable)) {
    std::ostringstream os;
    os << "eigensolver did not converge: worst residual " << worst << " > " << acceptable << " after "
       << rep.restarts << " restarts";
    fail(ErrorKind::solver, os.str());
  }
  rep.eigenvalues = best.values;
  rep.residuals = best.residuals;
  rep.vectors = best.vectors;

  if (kernel_tol) {
    rep.kernel_tol = *kernel_tol;
  } else if (a.grid->is_torus()) {
    double m = 0.0;
    for (double l : rep.eigenvalues) m = std::max(m, std::abs(l));
    rep.kernel_tol = 1e-8 * std::max(m, 1e-300);
  } else {
    rep.kernel_tol = 1e-3 * scalar_spectral_gap(a.grid);
  }
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
    if (std::abs(rep.eigenvalues[i]) < rep.kernel_tol) {
      ++rep.kernel_dim;
      rep.kernel_basis.push_back(a.from_reduced(rep.vectors.col(Eigen::Index(i))));
    }
  }
  return rep;
}

double scalar_spectral_gap(const GridPtr& grid) {
  const AssembledOperator scalar = assemble(grid, 0, SymmetryClass::general, OperatorKind::rough, 0.0);
  const SpectralReport r = spectrum(scalar, 2, 0.0);
  return r.eigenvalues.at(1);
}

}  // namespace lich
