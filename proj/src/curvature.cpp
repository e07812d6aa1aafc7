#include "lich/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "lich/error.hpp"
#include "lich/linalg.hpp"

namespace lich {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::size_t idx4(int n, int i, int j, int k, int l) {
  return std::size_t(((i * n + j) * n + k) * n + l);
}

Eigen::MatrixXd sym2_basis_matrix(int n, std::size_t a, const std::vector<std::pair<int, int>>& pairs) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  const auto [i, j] = pairs[a];
  if (i == j) {
    e(i, i) = 1.0;
  } else {
    e(i, j) = kInvSqrt2;
    e(j, i) = kInvSqrt2;
  }
  return e;
}

// M_Y(m,k) = R(e_m, Y, e_k, Y).
Eigen::MatrixXd plane_form(const CurvatureData& c, const Eigen::VectorXd& y) {
  const int n = c.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) s += c.riemann(a, j, b, l) * y(j) * y(l);
      m(a, b) = s;
    }
  return 0.5 * (m + m.transpose());
}

// Optimal unit X ⊥ Y for the quadratic form X ↦ R(X,Y,X,Y) (sign = +1 max, −1 min).
Eigen::VectorXd best_partner(const CurvatureData& c, const Eigen::VectorXd& y, double sign) {
  Eigen::MatrixXd ycol = y.normalized();
  const Eigen::MatrixXd z = orthogonal_complement(ycol);
  const Eigen::MatrixXd reduced = z.transpose() * plane_form(c, y.normalized()) * z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
  const Eigen::Index pick = sign > 0 ? es.eigenvalues().size() - 1 : 0;
  return z * es.eigenvectors().col(pick);
}

double plane_value(const CurvatureData& c, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return sectional_curvature(c, {x.data(), std::size_t(x.size())}, {y.data(), std::size_t(y.size())});
}

double refine(const CurvatureData& c, Eigen::VectorXd x, Eigen::VectorXd y, double sign) {
  double value = plane_value(c, x, y);
  for (int it = 0; it < 500; ++it) {
    x = best_partner(c, y, sign);
    y = best_partner(c, x, sign);
    const double next = plane_value(c, x, y);
    const double change = std::abs(next - value);
    value = next;
    if (change < 1e-10) break;
  }
  return value;
}

}  // namespace

std::vector<std::pair<int, int>> lambda2_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

std::vector<std::pair<int, int>> sym2_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.emplace_back(i, j);
  return out;
}

Eigen::VectorXd sym2_coordinates(const Eigen::MatrixXd& phi) {
  const int n = static_cast<int>(phi.rows());
  const auto pairs = sym2_pairs(n);
  Eigen::VectorXd v(Eigen::Index(pairs.size()));
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    const auto [i, j] = pairs[a];
    v(Eigen::Index(a)) = i == j ? phi(i, i) : kInvSqrt2 * (phi(i, j) + phi(j, i));
  }
  return v;
}

Eigen::MatrixXd sym2_matrix(int n, const Eigen::VectorXd& coords) {
  const auto pairs = sym2_pairs(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t a = 0; a < pairs.size(); ++a) m += coords(Eigen::Index(a)) * sym2_basis_matrix(n, a, pairs);
  return m;
}

CurvatureData CurvatureData::from_riemann(int n, std::vector<double> riemann,
                                          std::vector<CurvatureBlock> blocks) {
  if (n < 1 || n > 8) fail(ErrorKind::dimension, "curvature dimension outside [1, 8]");
  if (riemann.size() != std::size_t(n) * n * n * n)
    fail(ErrorKind::shape, "riemann array must have n^4 entries");
  CurvatureData c;
  c.n_ = n;
  c.r_ = std::move(riemann);
  c.blocks_ = std::move(blocks);
  c.ricci_ = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += c.riemann(i, k, i, l);
      c.ricci_(k, l) = s;
    }
  c.scalar_ = c.ricci_.trace();
  const auto l2 = lambda2_pairs(n);
  c.lambda2_.resize(Eigen::Index(l2.size()), Eigen::Index(l2.size()));
  for (std::size_t a = 0; a < l2.size(); ++a)
    for (std::size_t b = 0; b < l2.size(); ++b)
      c.lambda2_(Eigen::Index(a), Eigen::Index(b)) =
          c.riemann(l2[a].first, l2[a].second, l2[b].first, l2[b].second);
  const auto s2 = sym2_pairs(n);
  c.second_kind_.resize(Eigen::Index(s2.size()), Eigen::Index(s2.size()));
  for (std::size_t b = 0; b < s2.size(); ++b) {
    const Eigen::MatrixXd eb = sym2_basis_matrix(n, b, s2);
    Eigen::MatrixXd img = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) s += c.riemann(i, k, j, l) * eb(k, l);
        img(i, j) = s;
      }
    for (std::size_t a = 0; a < s2.size(); ++a)
      c.second_kind_(Eigen::Index(a), Eigen::Index(b)) =
          (sym2_basis_matrix(n, a, s2).array() * img.array()).sum();
  }
  return c;
}

void CurvatureData::validate(double tol) const {
  const int n = n_;
  auto bad = [](const char* what) { fail(ErrorKind::symmetry, std::string("curvature: ") + what); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double r = riemann(i, j, k, l);
          if (std::abs(r + riemann(j, i, k, l)) > tol) bad("R_ijkl != -R_jikl");
          if (std::abs(r + riemann(i, j, l, k)) > tol) bad("R_ijkl != -R_ijlk");
          if (std::abs(r - riemann(k, l, i, j)) > tol) bad("R_ijkl != R_klij");
          if (std::abs(r + riemann(i, k, l, j) + riemann(i, l, j, k)) > tol) bad("first Bianchi identity fails");
        }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += riemann(i, k, i, l);
      if (std::abs(s - ricci_(k, l)) > tol) bad("ricci is not the contraction of riemann");
    }
  if (std::abs(scalar_ - ricci_.trace()) > tol) bad("scalar != trace(ricci)");
  if ((lambda2_ - lambda2_.transpose()).cwiseAbs().maxCoeff() > tol) bad("lambda2_matrix not symmetric");
  if ((second_kind_ - second_kind_.transpose()).cwiseAbs().maxCoeff() > tol) bad("second_kind_matrix not symmetric");
}

Eigen::MatrixXd CurvatureData::curvature_endomorphism(int k, int l) const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = riemann(i, j, k, l);
  return m;
}

CurvatureData space_form_curvature(int n, double kappa) {
  if (n < 2) fail(ErrorKind::dimension, "space_form_curvature requires n >= 2");
  if (n > 8) fail(ErrorKind::dimension, "space_form_curvature supports n <= 8");
  std::vector<double> r(std::size_t(n) * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          r[idx4(n, i, j, k, l)] = kappa * (double(i == k && j == l) - double(i == l && j == k));
  return CurvatureData::from_riemann(n, std::move(r), {{0, n, kappa}});
}

CurvatureData line_curvature() {
  return CurvatureData::from_riemann(1, {0.0}, {{0, 1, 0.0}});
}

CurvatureData product_curvature(std::span<const CurvatureData> factors) {
  if (factors.size() < 2) fail(ErrorKind::shape, "product_curvature needs at least two factors");
  int n = 0;
  for (const auto& f : factors) n += f.dim();
  if (n > 8) fail(ErrorKind::dimension, "product dimension exceeds 8");
  std::vector<double> r(std::size_t(n) * n * n * n, 0.0);
  std::vector<CurvatureBlock> blocks;
  bool structured = true;
  int off = 0;
  for (const auto& f : factors) {
    const int m = f.dim();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l)
            r[idx4(n, off + i, off + j, off + k, off + l)] = f.riemann(i, j, k, l);
    if (f.blocks().empty()) structured = false;
    for (const auto& b : f.blocks()) blocks.push_back({b.offset + off, b.dim, b.kappa});
    off += m;
  }
  if (!structured) blocks.clear();
  return CurvatureData::from_riemann(n, std::move(r), std::move(blocks));
}

Eigen::MatrixXd curvature_operator_matrix(const CurvatureData& c) { return c.lambda2_matrix(); }

Eigen::MatrixXd second_kind_operator_matrix(const CurvatureData& c) { return c.second_kind_matrix(); }

double sectional_curvature(const CurvatureData& c, std::span<const double> x, std::span<const double> y) {
  const int n = c.dim();
  if (x.size() != std::size_t(n) || y.size() != std::size_t(n))
    fail(ErrorKind::shape, "sectional_curvature: vector length mismatch");
  double xx = 0, yy = 0, xy = 0;
  for (int i = 0; i < n; ++i) {
    xx += x[i] * x[i];
    yy += y[i] * y[i];
    xy += x[i] * y[i];
  }
  const double area = xx * yy - xy * xy;
  if (area <= 1e-24 * std::max(1.0, xx * yy))
    fail(ErrorKind::degenerate, "sectional_curvature: degenerate plane (X, Y dependent)");
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (x[i] == 0.0 && y[i] == 0.0) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) num += c.riemann(i, j, k, l) * x[i] * y[j] * x[k] * y[l];
    }
  return num / area;
}

SecExtremes sec_extremes(const CurvatureData& c, int budget, std::uint64_t seed) {
  if (budget < 1) fail(ErrorKind::shape, "sec_extremes: budget must be >= 1");
  const int n = c.dim();
  if (n < 2) return {0.0, 0.0, true};
  if (!c.blocks().empty()) {
    std::vector<double> values;
    for (const auto& b : c.blocks())
      if (b.dim >= 2) values.push_back(b.kappa);
    if (c.blocks().size() >= 2) values.push_back(0.0);  // mixed planes
    if (values.empty()) values.push_back(0.0);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi, true};
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double kmin = std::numeric_limits<double>::infinity();
  double kmax = -std::numeric_limits<double>::infinity();
  // Coordinate planes are cheap, deterministic extra starts.
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> starts;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      starts.emplace_back(Eigen::VectorXd::Unit(n, i), Eigen::VectorXd::Unit(n, j));
  for (int b = 0; b < budget; ++b) {
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) x(i) = gauss(rng);
    for (int i = 0; i < n; ++i) y(i) = gauss(rng);
    x.normalize();
    y -= y.dot(x) * x;
    y.normalize();
    starts.emplace_back(x, y);
  }
  for (const auto& [x, y] : starts) {
    kmin = std::min(kmin, refine(c, x, y, -1.0));
    kmax = std::max(kmax, refine(c, x, y, +1.0));
  }
  return {kmin, std::max(kmin, kmax), false};
}

double a0_estimate(const CurvatureData& c) {
  const int n = c.dim();
  const auto s2 = sym2_pairs(n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(Eigen::Index(s2.size()));
  for (std::size_t a = 0; a < s2.size(); ++a)
    if (s2[a].first == s2[a].second) u(Eigen::Index(a)) = 1.0;
  u /= u.norm();
  const Eigen::MatrixXd z = orthogonal_complement(u);
  const Eigen::MatrixXd restricted = z.transpose() * c.second_kind_matrix() * z;
  return eigen_decompose_symmetric(0.5 * (restricted + restricted.transpose())).values(0);
}

}  // namespace lich
