#include "lich/weitzenboeck.hpp"

#include <array>
#include <cmath>
#include <string>

#include "lich/error.hpp"
#include "lich/linalg.hpp"

namespace lich {
namespace {

void check_pair(const CurvatureData& c, const CovariantTensor& t) {
  if (c.dim() != t.dim())
    fail(ErrorKind::shape, "curvature dimension " + std::to_string(c.dim()) +
                               " does not match tensor dimension " + std::to_string(t.dim()));
}

void require_symmetric(const CovariantTensor& phi) {
  if (phi.order() != 2) fail(ErrorKind::order, "symmetric 2-tensor required");
  const Eigen::MatrixXd m = phi.as_matrix();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(ErrorKind::symmetry, "input 2-tensor is not symmetric");
}

}  // namespace

CovariantTensor weitzenboeck_apply(const CurvatureData& c, const CovariantTensor& t) {
  check_pair(c, t);
  const int n = t.dim();
  const int p = t.order();
  CovariantTensor out(n, p);
  if (p == 0) return out;
  std::array<int, kMaxOrder> idx{};
  std::array<int, kMaxOrder> w{};
  const std::span<const int> wspan(w.data(), std::size_t(p));
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.multi_index(f, {idx.data(), std::size_t(p)});
    double s = 0.0;
    for (int a = 0; a < p; ++a) {
      std::copy(idx.begin(), idx.begin() + p, w.begin());
      for (int j = 0; j < n; ++j) {
        w[a] = j;
        s += c.ricci()(idx[a], j) * t.at(wspan);
      }
    }
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) {
        std::copy(idx.begin(), idx.begin() + p, w.begin());
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            w[a] = j;
            w[b] = k;
            s -= 2.0 * c.riemann(j, idx[a], k, idx[b]) * t.at(wspan);
          }
      }
    out[f] = s;
  }
  return out;
}

CovariantTensor weitzenboeck_apply_commutator_form(const CurvatureData& c, const CovariantTensor& t) {
  check_pair(c, t);
  const int n = t.dim();
  const int p = t.order();
  CovariantTensor out(n, p);
  if (p == 0) return out;
  // U[j][l] = R(e_j, e_l)·T, the curvature endomorphism acting as a derivation.
  std::vector<CovariantTensor> u;
  u.reserve(std::size_t(n * n));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) u.push_back(skew_action(SkewEndomorphism(c.curvature_endomorphism(j, l)), t));
  std::array<int, kMaxOrder> idx{};
  std::array<int, kMaxOrder> w{};
  const std::span<const int> wspan(w.data(), std::size_t(p));
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.multi_index(f, {idx.data(), std::size_t(p)});
    double s = 0.0;
    for (int a = 0; a < p; ++a) {
      std::copy(idx.begin(), idx.begin() + p, w.begin());
      for (int j = 0; j < n; ++j) {
        w[a] = j;
        s += u[std::size_t(j * n + idx[a])].at(wspan);
      }
    }
    out[f] = s;
  }
  return out;
}

double weitzenboeck_quadratic(const CurvatureData& c, const CovariantTensor& t) {
  return inner_product(weitzenboeck_apply(c, t), t);
}

namespace {

double eigenframe_sum(const CurvatureData& c, const CovariantTensor& t) {
  check_pair(c, t);
  if (t.order() == 0 || c.dim() < 2) return 0.0;
  const SymmetricEigen eig = eigen_decompose_symmetric(c.lambda2_matrix());
  double s = 0.0;
  for (Eigen::Index a = 0; a < eig.values.size(); ++a) {
    const Eigen::VectorXd v = eig.vectors.col(a);
    const auto xi = SkewEndomorphism::from_lambda2(c.dim(), {v.data(), std::size_t(v.size())});
    const double nrm = skew_action(xi, t).norm();
    s += eig.values(a) * nrm * nrm;
  }
  return s;
}

}  // namespace

double weitzenboeck_quadratic_eigenframe(const CurvatureData& c, const CovariantTensor& t) {
  return kEigenframeNormalization * eigenframe_sum(c, t);
}

double calibrate_eigenframe_normalization(int n) {
  const CurvatureData c = space_form_curvature(n, 1.0);
  CovariantTensor t(n, 1);
  t[0] = 1.0;
  return weitzenboeck_quadratic(c, t) / eigenframe_sum(c, t);
}

CovariantTensor r2_apply(const CurvatureData& c, const CovariantTensor& phi) {
  check_pair(c, phi);
  require_symmetric(phi);
  const int n = phi.dim();
  const Eigen::MatrixXd f = phi.as_matrix();
  const Eigen::MatrixXd& ric = c.ricci();
  Eigen::MatrixXd out = ric * f + (ric * f).transpose();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += c.riemann(i, k, j, l) * f(k, l);
      out(i, j) -= 2.0 * s;
    }
  const Eigen::MatrixXd sym = 0.5 * (out + out.transpose());
  return CovariantTensor::from_matrix(sym, SymmetryClass::symmetric);
}

double r2_quadratic_eigenframe(const CurvatureData& c, const CovariantTensor& phi) {
  check_pair(c, phi);
  require_symmetric(phi);
  const int n = phi.dim();
  const Eigen::MatrixXd m = phi.as_matrix();
  const SymmetricEigen eig = eigen_decompose_symmetric(0.5 * (m + m.transpose()));
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Eigen::VectorXd ei = eig.vectors.col(i);
      const Eigen::VectorXd ej = eig.vectors.col(j);
      const double sec = sectional_curvature(c, {ei.data(), std::size_t(n)}, {ej.data(), std::size_t(n)});
      const double d = eig.values(i) - eig.values(j);
      s += sec * d * d;
    }
  return 2.0 * s;
}

double einstein_shift(double s, int n) {
  if (n < 2) fail(ErrorKind::dimension, "einstein_shift requires n >= 2");
  return 2.0 * s / n;
}

Eigen::MatrixXd weitzenboeck_matrix(const CurvatureData& c, int p) {
  return linear_map_matrix(c.dim(), p, [&](const CovariantTensor& e) { return weitzenboeck_apply(c, e); });
}

}  // namespace lich
