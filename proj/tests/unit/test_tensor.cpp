#include <cmath>
#include <random>

#include "doctest.h"
#include "lich/error.hpp"
#include "lich/linalg.hpp"
#include "lich/tensor.hpp"
#include "oracles.hpp"

using lich::CovariantTensor;
using lich::SymmetryClass;

TEST_CASE("inner product") {
  CHECK(lich::inner_product(CovariantTensor(3, 2), CovariantTensor(3, 2)) == 0.0);
  CHECK(lich::inner_product(CovariantTensor::metric(3), CovariantTensor::metric(3)) == 3.0);
  std::mt19937_64 rng(1);
  const CovariantTensor t = oracle::random_tensor(4, 3, rng), u = oracle::random_tensor(4, 3, rng);
  double brute = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        const int idx[3] = {i, j, k};
        brute += t.at(idx) * u.at(idx);
      }
  CHECK(lich::inner_product(t, u) == doctest::Approx(brute).epsilon(1e-13));
  CHECK_THROWS_AS(lich::inner_product(CovariantTensor(3, 2), CovariantTensor(2, 2)), lich::Error);
}

TEST_CASE("row-major component layout") {
  CovariantTensor t(3, 3);
  const int idx[3] = {2, 0, 1};
  CHECK(t.flat_index(idx) == std::size_t(2 * 9 + 0 * 3 + 1));
  int back[3];
  t.multi_index(19, back);
  CHECK(back[0] == 2);
  CHECK(back[1] == 0);
  CHECK(back[2] == 1);
}

TEST_CASE("metric trace") {
  CHECK(lich::trace_g(CovariantTensor::metric(5), 0, 1)[0] == 5.0);
  Eigen::MatrixXd d(2, 2);
  d << 1, 0, 0, -1;
  CHECK(lich::trace_g(CovariantTensor::from_matrix(d), 0, 1)[0] == 0.0);
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd s = oracle::random_symmetric(3, rng);
  CHECK(lich::trace_g(CovariantTensor::from_matrix(s, SymmetryClass::symmetric), 0, 1)[0] ==
        doctest::Approx(s.trace()).epsilon(1e-14));
  // Trace over non-adjacent slots of a product g ⊗ T equals n·T.
  const CovariantTensor t = oracle::random_tensor(3, 1, rng);
  const CovariantTensor gt = lich::tensor_product(CovariantTensor::metric(3), t);
  const CovariantTensor tr = lich::trace_g(gt, 0, 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(tr[i] == doctest::Approx(3.0 * t[i]));
}

TEST_CASE("symmetry projections") {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd s = oracle::random_symmetric(3, rng);
  const CovariantTensor sym = CovariantTensor::from_matrix(s, SymmetryClass::symmetric);
  CHECK((lich::project_symmetry(sym, SymmetryClass::symmetric) - sym).max_abs() < 1e-15);

  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 0, 0;
  const CovariantTensor alt = lich::project_symmetry(CovariantTensor::from_matrix(m), SymmetryClass::alternating);
  CHECK(alt.as_matrix()(0, 1) == doctest::Approx(0.5));
  CHECK(alt.as_matrix()(1, 0) == doctest::Approx(-0.5));
  CHECK(alt.as_matrix()(0, 0) == 0.0);

  CHECK(lich::project_symmetry(CovariantTensor::metric(3), SymmetryClass::symmetric_traceless).max_abs() < 1e-15);

  // Idempotent and orthogonal for every class on a random 3-tensor.
  const CovariantTensor t = oracle::random_tensor(3, 3, rng);
  for (SymmetryClass cls : {SymmetryClass::symmetric, SymmetryClass::alternating, SymmetryClass::symmetric_traceless}) {
    const CovariantTensor pt = lich::project_symmetry(t, cls);
    CHECK((lich::project_symmetry(pt, cls) - pt).max_abs() < 1e-13);
    CHECK(std::abs(lich::inner_product(t - pt, pt)) < 1e-12);
  }
}

TEST_CASE("class bases have the expected dimensions and are orthonormal") {
  auto binom = [](int a, int b) {
    double r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return Eigen::Index(std::lround(r));
  };
  for (int n = 2; n <= 4; ++n)
    for (int p = 1; p <= 3; ++p) {
      const auto& s = lich::class_basis(n, p, SymmetryClass::symmetric);
      CHECK(s.cols() == binom(n + p - 1, p));
      CHECK((s.transpose() * s - Eigen::MatrixXd::Identity(s.cols(), s.cols())).norm() < 1e-12);
      if (p <= n) CHECK(lich::class_basis(n, p, SymmetryClass::alternating).cols() == binom(n, p));
      if (p >= 2)
        CHECK(lich::class_basis(n, p, SymmetryClass::symmetric_traceless).cols() ==
              binom(n + p - 1, p) - binom(n + p - 3, p - 2));
      CHECK(lich::class_basis(n, p, SymmetryClass::general).cols() == Eigen::Index(lich::ipow(n, p)));
    }
  CHECK_FALSE(lich::class_valid(2, 3, SymmetryClass::alternating));
  CHECK_FALSE(lich::class_valid(3, 1, SymmetryClass::symmetric_traceless));
}

TEST_CASE("class invariants are enforced") {
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(CovariantTensor::from_matrix(m, SymmetryClass::symmetric), lich::Error);
  try {
    CovariantTensor::from_matrix(m, SymmetryClass::alternating);
    FAIL("expected a symmetry error");
  } catch (const lich::Error& e) {
    CHECK(e.kind() == lich::ErrorKind::symmetry);
  }
  CHECK_THROWS_AS(CovariantTensor::from_components(2, 2, {1, 2, 3}), lich::Error);
}

TEST_CASE("skew endomorphism action") {
  std::mt19937_64 rng(4);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = 0.7, a(1, 0) = -0.7, a(1, 2) = -1.3, a(2, 1) = 1.3;
  const lich::SkewEndomorphism A(a);
  CHECK(lich::skew_action(A, CovariantTensor::scalar(3, 2.5)).max_abs() == 0.0);
  CHECK(lich::skew_action(A, CovariantTensor::metric(3)).max_abs() < 1e-15);

  Eigen::MatrixXd j(2, 2);
  j << 0, -1, 1, 0;
  const CovariantTensor w = oracle::random_tensor(2, 1, rng);
  const CovariantTensor aw = lich::skew_action(lich::SkewEndomorphism(j), w);
  // (A·ω)(X) = −ω(AX): components −Σ_m ω_m A_mi.
  const Eigen::Vector2d expect = -(j.transpose() * Eigen::Vector2d(w[0], w[1]));
  CHECK(aw[0] == doctest::Approx(expect(0)));
  CHECK(aw[1] == doctest::Approx(expect(1)));

  // Derivation on tensor products.
  const CovariantTensor s = oracle::random_tensor(3, 1, rng), t = oracle::random_tensor(3, 2, rng);
  const CovariantTensor lhs = lich::skew_action(A, lich::tensor_product(s, t));
  const CovariantTensor rhs = lich::tensor_product(lich::skew_action(A, s), t) +
                              lich::tensor_product(s, lich::skew_action(A, t));
  CHECK((lhs - rhs).max_abs() < 1e-13);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(lich::SkewEndomorphism{bad}, lich::Error);
}

TEST_CASE("orthogonal pullback preserves norms and matches its matrix") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(oracle::random_symmetric(3, rng)).householderQ();
  const CovariantTensor t = oracle::random_tensor(3, 3, rng);
  const CovariantTensor pt = lich::pullback(q, t);
  CHECK(pt.norm() == doctest::Approx(t.norm()).epsilon(1e-13));
  const Eigen::MatrixXd pm = lich::pullback_matrix(q, 3);
  const Eigen::Map<const Eigen::VectorXd> tv(t.components().data(), Eigen::Index(t.size()));
  const Eigen::VectorXd image = pm * tv;
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(image(Eigen::Index(i)) == doctest::Approx(pt[i]).epsilon(1e-12));
}

TEST_CASE("symmetric eigendecomposition") {
  const lich::SymmetricEigen id = lich::eigen_decompose_symmetric(Eigen::MatrixXd::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(id.values(i) == doctest::Approx(1.0));
  Eigen::MatrixXd d(2, 2);
  d << -1, 0, 0, 2;
  const lich::SymmetricEigen de = lich::eigen_decompose_symmetric(d);
  CHECK(de.values(0) == doctest::Approx(2.0));
  CHECK(de.values(1) == doctest::Approx(-1.0));
  CHECK(std::abs(de.vectors(1, 0)) == doctest::Approx(1.0));
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd m = oracle::random_symmetric(6, rng);
  const lich::SymmetricEigen e = lich::eigen_decompose_symmetric(m);
  CHECK((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - m).norm() < 1e-9);
  Eigen::MatrixXd ns = m;
  ns(0, 1) += 1.0;
  CHECK_THROWS_AS(lich::eigen_decompose_symmetric(ns), lich::Error);
}
