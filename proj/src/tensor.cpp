#include "lich/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>

#include "lich/error.hpp"

namespace lich {
namespace {

void check_dims(int n, int p) {
  if (n < 2 || n > kMaxDim)
    fail(ErrorKind::dimension, "tensor dimension n=" + std::to_string(n) + " outside [2, 8]");
  if (p < 0 || p > kMaxOrder)
    fail(ErrorKind::order, "tensor order p=" + std::to_string(p) + " outside [0, 4]");
}

void check_same_shape(const CovariantTensor& a, const CovariantTensor& b, const char* op) {
  if (a.dim() != b.dim() || a.order() != b.order())
    fail(ErrorKind::shape, std::string(op) + ": shape mismatch (n=" + std::to_string(a.dim()) +
                               ",p=" + std::to_string(a.order()) + ") vs (n=" +
                               std::to_string(b.dim()) + ",p=" + std::to_string(b.order()) + ")");
}

int permutation_sign(std::span<const int> perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return (inversions % 2 == 0) ? 1 : -1;
}

// Averages T over slot permutations, optionally with the permutation sign.
CovariantTensor average_over_permutations(const CovariantTensor& t, bool signed_average) {
  const int n = t.dim();
  const int p = t.order();
  CovariantTensor out(n, p);
  if (p <= 1) {
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i];
    return out;
  }
  std::array<int, kMaxOrder + 1> perm{};
  std::iota(perm.begin(), perm.begin() + p, 0);
  std::array<int, kMaxOrder + 1> idx{};
  std::array<int, kMaxOrder + 1> pidx{};
  int count = 0;
  do {
    const double sign = signed_average ? permutation_sign({perm.data(), std::size_t(p)}) : 1.0;
    for (std::size_t f = 0; f < t.size(); ++f) {
      t.multi_index(f, {idx.data(), std::size_t(p)});
      for (int a = 0; a < p; ++a) pidx[a] = idx[perm[a]];
      out[f] += sign * t[t.flat_index({pidx.data(), std::size_t(p)})];
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.begin() + p));
  out *= 1.0 / count;
  return out;
}

Eigen::MatrixXd build_symmetric_basis(int n, int p, bool alternating) {
  const std::size_t dim = ipow(n, p);
  std::vector<Eigen::VectorXd> cols;
  std::array<int, kMaxOrder + 1> idx{};
  CovariantTensor probe(n, p);
  for (std::size_t f = 0; f < dim; ++f) {
    probe.multi_index(f, {idx.data(), std::size_t(p)});
    bool canonical = true;
    for (int a = 0; a + 1 < p; ++a) {
      if (alternating ? idx[a] >= idx[a + 1] : idx[a] > idx[a + 1]) canonical = false;
    }
    if (!canonical) continue;
    CovariantTensor e(n, p);
    e[f] = 1.0;
    CovariantTensor proj = average_over_permutations(e, alternating);
    Eigen::Map<const Eigen::VectorXd> v(proj.components().data(), Eigen::Index(dim));
    cols.push_back(v / v.norm());
  }
  Eigen::MatrixXd b(Eigen::Index(dim), Eigen::Index(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) b.col(Eigen::Index(k)) = cols[k];
  return b;
}

Eigen::MatrixXd build_traceless_basis(int n, int p) {
  const Eigen::MatrixXd bs = build_symmetric_basis(n, p, false);
  const std::size_t tdim = ipow(n, p - 2);
  Eigen::MatrixXd tr(Eigen::Index(tdim), bs.cols());
  for (Eigen::Index k = 0; k < bs.cols(); ++k) {
    std::vector<double> comp(bs.col(k).data(), bs.col(k).data() + bs.rows());
    CovariantTensor t = CovariantTensor::from_components(n, p, std::move(comp));
    CovariantTensor c = trace_g(t, 0, 1);
    for (std::size_t i = 0; i < tdim; ++i) tr(Eigen::Index(i), k) = c[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tr.transpose() * tr);
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) < 1e-10) null_cols.push_back(k);
  Eigen::MatrixXd null(bs.cols(), Eigen::Index(null_cols.size()));
  for (std::size_t k = 0; k < null_cols.size(); ++k) null.col(Eigen::Index(k)) = es.eigenvectors().col(null_cols[k]);
  Eigen::MatrixXd b = bs * null;
  // Fix the sign of each column deterministically: first significant entry positive.
  for (Eigen::Index k = 0; k < b.cols(); ++k) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      if (std::abs(b(i, k)) > 1e-8) {
        if (b(i, k) < 0) b.col(k) *= -1.0;
        break;
      }
    }
  }
  return b;
}

}  // namespace

std::string_view to_string(SymmetryClass cls) noexcept {
  switch (cls) {
    case SymmetryClass::general: return "general";
    case SymmetryClass::symmetric: return "symmetric";
    case SymmetryClass::alternating: return "alternating";
    case SymmetryClass::symmetric_traceless: return "symmetric_traceless";
  }
  return "general";
}

SymmetryClass parse_symmetry_class(std::string_view name) {
  if (name == "general" || name == "full") return SymmetryClass::general;
  if (name == "symmetric") return SymmetryClass::symmetric;
  if (name == "alternating") return SymmetryClass::alternating;
  if (name == "symmetric_traceless" || name == "traceless") return SymmetryClass::symmetric_traceless;
  fail(ErrorKind::config, "unknown symmetry class '" + std::string(name) + "'");
}

std::size_t ipow(int n, int p) noexcept {
  std::size_t r = 1;
  for (int i = 0; i < p; ++i) r *= static_cast<std::size_t>(n);
  return r;
}

bool class_valid(int n, int p, SymmetryClass cls) noexcept {
  switch (cls) {
    case SymmetryClass::general:
    case SymmetryClass::symmetric: return true;
    case SymmetryClass::alternating: return p <= n;
    case SymmetryClass::symmetric_traceless: return p >= 2;
  }
  return false;
}

CovariantTensor::CovariantTensor(int n, int p, SymmetryClass cls)
    : n_(n), p_(p), cls_(cls) {
  check_dims(n, p);
  c_.assign(ipow(n, p), 0.0);
}

CovariantTensor CovariantTensor::from_components(int n, int p, std::vector<double> components,
                                                 SymmetryClass cls) {
  check_dims(n, p);
  if (components.size() != ipow(n, p))
    fail(ErrorKind::shape, "from_components: expected " + std::to_string(ipow(n, p)) +
                               " components, got " + std::to_string(components.size()));
  CovariantTensor t(n, p);
  t.c_ = std::move(components);
  t.set_symmetry(cls);
  return t;
}

CovariantTensor CovariantTensor::metric(int n) {
  CovariantTensor g(n, 2, SymmetryClass::symmetric);
  for (int i = 0; i < n; ++i) g.c_[std::size_t(i * n + i)] = 1.0;
  return g;
}

CovariantTensor CovariantTensor::scalar(int n, double value) {
  CovariantTensor s(n, 0);
  s.c_[0] = value;
  return s;
}

CovariantTensor CovariantTensor::from_matrix(const Eigen::MatrixXd& m, SymmetryClass cls) {
  if (m.rows() != m.cols()) fail(ErrorKind::shape, "from_matrix: matrix not square");
  const int n = static_cast<int>(m.rows());
  std::vector<double> c(ipow(n, 2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[std::size_t(i * n + j)] = m(i, j);
  return from_components(n, 2, std::move(c), cls);
}

std::size_t CovariantTensor::flat_index(std::span<const int> index) const {
  if (index.size() != std::size_t(p_))
    fail(ErrorKind::index, "multi-index length " + std::to_string(index.size()) +
                               " does not match order " + std::to_string(p_));
  std::size_t f = 0;
  for (int i : index) {
    if (i < 0 || i >= n_) fail(ErrorKind::index, "index " + std::to_string(i) + " out of range");
    f = f * std::size_t(n_) + std::size_t(i);
  }
  return f;
}

void CovariantTensor::multi_index(std::size_t flat, std::span<int> out) const noexcept {
  for (int a = p_ - 1; a >= 0; --a) {
    out[std::size_t(a)] = static_cast<int>(flat % std::size_t(n_));
    flat /= std::size_t(n_);
  }
}

double CovariantTensor::at(std::span<const int> index) const { return c_[flat_index(index)]; }

Eigen::MatrixXd CovariantTensor::as_matrix() const {
  if (p_ != 2) fail(ErrorKind::order, "as_matrix requires p = 2");
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = c_[std::size_t(i * n_ + j)];
  return m;
}

void CovariantTensor::check_invariants(double tol) const {
  if (c_.size() != ipow(n_, p_)) fail(ErrorKind::shape, "component count mismatch");
  if (cls_ == SymmetryClass::general) return;
  if (!class_valid(n_, p_, cls_))
    fail(ErrorKind::order, std::string("class ") + std::string(to_string(cls_)) +
                               " invalid for n=" + std::to_string(n_) + ", p=" + std::to_string(p_));
  const double sign = cls_ == SymmetryClass::alternating ? -1.0 : 1.0;
  std::array<int, kMaxOrder + 1> idx{};
  for (std::size_t f = 0; f < c_.size(); ++f) {
    multi_index(f, {idx.data(), std::size_t(p_)});
    for (int a = 0; a + 1 < p_; ++a) {
      std::swap(idx[a], idx[a + 1]);
      const double other = c_[flat_index({idx.data(), std::size_t(p_)})];
      std::swap(idx[a], idx[a + 1]);
      if (std::abs(c_[f] - sign * other) > tol)
        fail(ErrorKind::symmetry, std::string("components violate ") +
                                      std::string(to_string(cls_)) + " symmetry");
    }
  }
  if (cls_ == SymmetryClass::symmetric_traceless) {
    for (int a = 0; a < p_; ++a)
      for (int b = a + 1; b < p_; ++b)
        if (trace_g(*this, a, b).max_abs() > tol)
          fail(ErrorKind::symmetry, "symmetric_traceless tensor has nonzero trace");
  }
}

void CovariantTensor::set_symmetry(SymmetryClass cls, double tol) {
  const SymmetryClass old = cls_;
  cls_ = cls;
  try {
    check_invariants(tol);
  } catch (...) {
    cls_ = old;
    throw;
  }
}

CovariantTensor& CovariantTensor::operator+=(const CovariantTensor& other) {
  check_same_shape(*this, other, "operator+=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
  if (cls_ != other.cls_) cls_ = SymmetryClass::general;
  return *this;
}

CovariantTensor& CovariantTensor::operator-=(const CovariantTensor& other) {
  check_same_shape(*this, other, "operator-=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
  if (cls_ != other.cls_) cls_ = SymmetryClass::general;
  return *this;
}

CovariantTensor& CovariantTensor::operator*=(double s) noexcept {
  for (double& v : c_) v *= s;
  return *this;
}

double CovariantTensor::norm() const noexcept {
  double s = 0.0;
  for (double v : c_) s += v * v;
  return std::sqrt(s);
}

double CovariantTensor::max_abs() const noexcept {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

SkewEndomorphism::SkewEndomorphism(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) fail(ErrorKind::shape, "skew endomorphism must be square");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  if ((m_ + m_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(ErrorKind::symmetry, "skew endomorphism matrix is not antisymmetric");
}

SkewEndomorphism SkewEndomorphism::from_lambda2(int n, std::span<const double> omega) {
  if (omega.size() != std::size_t(n * (n - 1) / 2))
    fail(ErrorKind::shape, "from_lambda2: wrong number of 2-form components");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  std::size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) {
      a(i, j) = omega[k];
      a(j, i) = -omega[k];
    }
  return SkewEndomorphism(std::move(a));
}

double inner_product(const CovariantTensor& t, const CovariantTensor& u) {
  check_same_shape(t, u, "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * u[i];
  return s;
}

CovariantTensor trace_g(const CovariantTensor& t, int slot_a, int slot_b) {
  const int n = t.dim();
  const int p = t.order();
  if (p < 2) fail(ErrorKind::order, "trace_g requires p >= 2");
  if (slot_a < 0 || slot_a >= p || slot_b < 0 || slot_b >= p || slot_a == slot_b)
    fail(ErrorKind::index, "trace_g: invalid slots (" + std::to_string(slot_a) + "," +
                               std::to_string(slot_b) + ") for order " + std::to_string(p));
  CovariantTensor out(n, p - 2);
  std::array<int, kMaxOrder + 1> outer{};
  std::array<int, kMaxOrder + 1> full{};
  for (std::size_t f = 0; f < out.size(); ++f) {
    out.multi_index(f, {outer.data(), std::size_t(p - 2)});
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      int o = 0;
      for (int a = 0; a < p; ++a) full[a] = (a == slot_a || a == slot_b) ? i : outer[o++];
      s += t.at({full.data(), std::size_t(p)});
    }
    out[f] = s;
  }
  return out;
}

CovariantTensor project_symmetry(const CovariantTensor& t, SymmetryClass cls) {
  const int n = t.dim();
  const int p = t.order();
  if (!class_valid(n, p, cls))
    fail(ErrorKind::order, std::string("class ") + std::string(to_string(cls)) +
                               " invalid for n=" + std::to_string(n) + ", p=" + std::to_string(p));
  CovariantTensor out(n, p);
  switch (cls) {
    case SymmetryClass::general:
      out = t;
      break;
    case SymmetryClass::symmetric:
      out = average_over_permutations(t, false);
      break;
    case SymmetryClass::alternating:
      out = average_over_permutations(t, true);
      break;
    case SymmetryClass::symmetric_traceless: {
      const Eigen::MatrixXd& b = class_basis(n, p, cls);
      Eigen::Map<const Eigen::VectorXd> v(t.components().data(), Eigen::Index(t.size()));
      const Eigen::VectorXd pv = b * (b.transpose() * v);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = pv(Eigen::Index(i));
      break;
    }
  }
  // Tag without re-validation: the projection satisfies the invariants up to roundoff.
  CovariantTensor tagged(n, p, cls);
  for (std::size_t i = 0; i < out.size(); ++i) tagged[i] = out[i];
  return tagged;
}

CovariantTensor apply_to_slot(const CovariantTensor& t, int slot, const Eigen::MatrixXd& m) {
  const int n = t.dim();
  const int p = t.order();
  if (m.rows() != n || m.cols() != n) fail(ErrorKind::shape, "apply_to_slot: matrix/tensor dimension mismatch");
  if (slot < 0 || slot >= p) fail(ErrorKind::index, "apply_to_slot: slot out of range");
  CovariantTensor out(n, p);
  const std::size_t stride = ipow(n, p - 1 - slot);
  const std::size_t block = stride * std::size_t(n);
  for (std::size_t base = 0; base < t.size(); base += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += m(k, i) * t[base + std::size_t(k) * stride + inner];
        out[base + std::size_t(i) * stride + inner] = s;
      }
    }
  }
  return out;
}

CovariantTensor skew_action(const SkewEndomorphism& a, const CovariantTensor& t) {
  if (a.dim() != t.dim()) fail(ErrorKind::shape, "skew_action: dimension mismatch");
  CovariantTensor out(t.dim(), t.order());
  for (int s = 0; s < t.order(); ++s) out -= apply_to_slot(t, s, a.matrix());
  return out;
}

CovariantTensor pullback(const Eigen::MatrixXd& q, const CovariantTensor& t) {
  if (q.rows() != t.dim() || q.cols() != t.dim()) fail(ErrorKind::shape, "pullback: dimension mismatch");
  CovariantTensor out = t;
  for (int s = 0; s < t.order(); ++s) out = apply_to_slot(out, s, q);
  return out;
}

Eigen::MatrixXd pullback_matrix(const Eigen::MatrixXd& q, int p) {
  const int n = static_cast<int>(q.rows());
  return linear_map_matrix(n, p, [&](const CovariantTensor& e) { return pullback(q, e); });
}

CovariantTensor tensor_product(const CovariantTensor& t, const CovariantTensor& u) {
  if (t.dim() != u.dim()) fail(ErrorKind::shape, "tensor_product: dimension mismatch");
  CovariantTensor out(t.dim(), t.order() + u.order());
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) out[i * u.size() + j] = t[i] * u[j];
  return out;
}

const Eigen::MatrixXd& class_basis(int n, int p, SymmetryClass cls) {
  check_dims(n, p);
  if (!class_valid(n, p, cls))
    fail(ErrorKind::order, std::string("class ") + std::string(to_string(cls)) +
                               " invalid for n=" + std::to_string(n) + ", p=" + std::to_string(p));
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<Eigen::MatrixXd>> cache;
  const auto key = std::make_tuple(n, p, static_cast<int>(cls));
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  Eigen::MatrixXd b;
  switch (cls) {
    case SymmetryClass::general:
      b = Eigen::MatrixXd::Identity(Eigen::Index(ipow(n, p)), Eigen::Index(ipow(n, p)));
      break;
    case SymmetryClass::symmetric: b = build_symmetric_basis(n, p, false); break;
    case SymmetryClass::alternating: b = build_symmetric_basis(n, p, true); break;
    case SymmetryClass::symmetric_traceless: b = build_traceless_basis(n, p); break;
  }
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, std::make_unique<Eigen::MatrixXd>(std::move(b)));
  return *it->second;
}

}  // namespace lich
