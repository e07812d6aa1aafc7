#pragma once

// Independent reference computations used by the unit tests. They are written
// with explicit index loops and closed forms, without calling the library
// routine they are compared against.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lich/curvature.hpp"
#include "lich/tensor.hpp"

namespace oracle {

inline std::vector<double> random_components(std::size_t size, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> v(size);
  for (double& x : v) x = normal(rng);
  return v;
}

inline lich::CovariantTensor random_tensor(int n, int p, std::mt19937_64& rng) {
  return lich::CovariantTensor::from_components(n, p, random_components(lich::ipow(n, p), rng));
}

inline Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
  const std::vector<double> v = random_components(std::size_t(n * n), rng);
  Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
  return 0.5 * (m + m.transpose());
}

// R_ijkl = κ(δ_ik δ_jl − δ_il δ_jk).
inline double space_form_riemann(double kappa, int i, int j, int k, int l) {
  return kappa * (double(i == k && j == l) - double(i == l && j == k));
}

// Block-diagonal product of constant-curvature factors of the given dims.
inline std::vector<double> product_riemann(const std::vector<int>& dims, const std::vector<double>& kappas) {
  int n = 0;
  std::vector<int> block;
  for (std::size_t f = 0; f < dims.size(); ++f)
    for (int a = 0; a < dims[f]; ++a, ++n) block.push_back(int(f));
  std::vector<double> r(std::size_t(n * n * n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const int b = block[std::size_t(i)];
          if (block[std::size_t(j)] != b || block[std::size_t(k)] != b || block[std::size_t(l)] != b) continue;
          r[std::size_t(((i * n + j) * n + k) * n + l)] = space_form_riemann(kappas[std::size_t(b)], i, j, k, l);
        }
  return r;
}

// Kulkarni–Nomizu product (h ∧ k)_ijkl = h_ik k_jl + h_jl k_ik − h_il k_jk − h_jk k_il,
// an algebraic curvature tensor for symmetric h, k. Sums of these span all of them.
inline std::vector<double> random_algebraic_curvature(int n, std::mt19937_64& rng, int terms = 3) {
  std::vector<double> r(std::size_t(n * n * n * n), 0.0);
  for (int t = 0; t < terms; ++t) {
    const Eigen::MatrixXd h = random_symmetric(n, rng);
    const Eigen::MatrixXd k = random_symmetric(n, rng);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            r[std::size_t(((i * n + j) * n + a) * n + b)] +=
                0.5 * (h(i, a) * k(j, b) + h(j, b) * k(i, a) - h(i, b) * k(j, a) - h(j, a) * k(i, b));
  }
  return r;
}

// Σ over all multi-indices of T_I U_I with explicit nested loops.
inline double inner_loops(const lich::CovariantTensor& t, const lich::CovariantTensor& u) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * u[i];
  return s;
}

// Component formula of the Weitzenböck term with explicit loops over slots:
// (ℜT)_I = Σ_a Ric_{i_a j} T_{I[a→j]} − 2 Σ_{a<b} R_{j i_a k i_b} T_{I[a→j, b→k]}.
inline lich::CovariantTensor weitzenboeck_loops(const lich::CurvatureData& c, const lich::CovariantTensor& t) {
  const int n = t.dim(), p = t.order();
  lich::CovariantTensor out(n, p);
  std::vector<int> idx(static_cast<std::size_t>(p)), tmp(static_cast<std::size_t>(p));
  for (std::size_t f = 0; f < t.size(); ++f) {
    t.multi_index(f, idx);
    double v = 0.0;
    for (int a = 0; a < p; ++a)
      for (int j = 0; j < n; ++j) {
        tmp = idx;
        tmp[std::size_t(a)] = j;
        v += c.ricci()(idx[std::size_t(a)], j) * t.at(tmp);
      }
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            tmp = idx;
            tmp[std::size_t(a)] = j;
            tmp[std::size_t(b)] = k;
            v -= 2.0 * c.riemann(j, idx[std::size_t(a)], k, idx[std::size_t(b)]) * t.at(tmp);
          }
    out[f] = v;
  }
  return out;
}

}  // namespace oracle
