// End-to-end acceptance run: twelve numbered criteria, one PASS/FAIL line each.
// Exit status is 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lich/checker.hpp"
#include "lich/curvature.hpp"
#include "lich/diagnostics.hpp"
#include "lich/error.hpp"
#include "lich/fields.hpp"
#include "lich/model_space.hpp"
#include "lich/operators.hpp"
#include "lich/spectrum.hpp"
#include "lich/weitzenboeck.hpp"

using namespace lich;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates a pass flag and a short human-readable trail of measured values.
class Tally {
 public:
  void require(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& what) { notes_.push_back(what); }
  Outcome outcome() const {
    std::ostringstream os;
    const auto& list = failures_.empty() ? notes_ : failures_;
    for (std::size_t i = 0; i < list.size(); ++i) os << (i ? "; " : "") << list[i];
    return {pass_, os.str()};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> notes_, failures_;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

GridPtr torus(int n, int res) { return Grid::make(ModelSpace::parse("torus:n=" + std::to_string(n)), {res}); }
GridPtr sphere(int nt) { return Grid::make(ModelSpace::parse("sphere:n=2"), {nt, 2 * nt}); }

CovariantTensor random_tensor(int n, int p, SymmetryClass cls, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> v(ipow(n, p));
  for (double& x : v) x = normal(rng);
  return project_symmetry(CovariantTensor::from_components(n, p, std::move(v)), cls);
}

// Requests more eigenpairs until the kernel is strictly inside the computed window.
SpectralReport covering_spectrum(const AssembledOperator& op, int k) {
  const int cap = int(op.size()) - 1;
  k = std::min(k, cap);
  for (;;) {
    SpectralReport r = spectrum(op, k);
    if (r.kernel_dim < k || k >= cap) return r;
    k = std::min(2 * k, cap);
  }
}

double max_residual(const SpectralReport& r) {
  double worst = 0.0;
  for (double x : r.residuals) worst = std::max(worst, x);
  return worst;
}

// ---- 1 ----
Outcome weitzenboeck_cross_validation() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> kappa(0.25, 2.0);
  std::vector<ModelSpace> spaces;
  for (const char* s : {"sphere:n=2", "sphere:n=3", "sphere:n=4", "hyperbolic:n=2", "hyperbolic:n=3", "hyperbolic:n=4",
                        "torus:n=2", "torus:n=3", "product:sphere2+sphere2", "product:sphere2+line"})
    spaces.push_back(ModelSpace::parse(s));
  for (int i = 0; i < 4; ++i) {
    spaces.push_back(ModelSpace::space_form(2 + i % 3, i % 2 ? -kappa(rng) : kappa(rng)));
    spaces.push_back(ModelSpace::product({Factor{FactorKind::sphere, 2, kappa(rng), {}},
                                          Factor{FactorKind::hyperbolic, 2, -kappa(rng), {}}}));
  }
  const SymmetryClass classes[] = {SymmetryClass::general, SymmetryClass::symmetric, SymmetryClass::alternating,
                                   SymmetryClass::symmetric_traceless};
  double worst_apply = 0.0, worst_quad = 0.0;
  int pairs = 0;
  for (int round = 0; round < 4; ++round)
    for (const ModelSpace& m : spaces) {
      const CurvatureData c = m.curvature();
      const int n = c.dim();
      for (int p = 1; p <= 3; ++p) {
        const SymmetryClass cls = classes[std::size_t(round + p) % 4];
        if (!class_valid(n, p, cls)) continue;
        const CovariantTensor t = random_tensor(n, p, cls, rng);
        const CovariantTensor a = weitzenboeck_apply(c, t);
        const CovariantTensor b = weitzenboeck_apply_commutator_form(c, t);
        const double scale = std::max({a.norm(), b.norm(), t.norm() * t.norm(), 1e-300});
        worst_apply = std::max(worst_apply, (a - b).norm() / std::max({a.norm(), b.norm(), t.norm()}));
        const double q = weitzenboeck_quadratic(c, t);
        const double e = weitzenboeck_quadratic_eigenframe(c, t);
        worst_quad = std::max(worst_quad, std::abs(q - e) / std::max({std::abs(q), std::abs(e), scale}));
        ++pairs;
      }
    }
  Tally t;
  t.require(pairs >= 100, "only " + std::to_string(pairs) + " pairs");
  t.require(worst_apply <= 1e-10, "component vs commutator form " + fmt(worst_apply));
  t.require(worst_quad <= 1e-10, "quadratic vs eigenframe " + fmt(worst_quad));
  t.note(std::to_string(pairs) + " pairs, component/commutator " + fmt(worst_apply) + ", quadratic/eigenframe " +
         fmt(worst_quad));
  return t.outcome();
}

// ---- 2 ----
Outcome symmetric_two_tensor_forms() {
  std::mt19937_64 rng(202);
  double worst_action = 0.0, worst_display = 0.0, metric_image = 0.0;
  int samples = 0;
  for (const char* s : {"sphere:n=2", "sphere:n=3", "sphere:n=4", "sphere:n=3,k=2", "hyperbolic:n=3", "hyperbolic:n=4",
                        "torus:n=2", "torus:n=3", "product:sphere2+sphere2", "product:sphere2+line",
                        "product:sphere2(0.5)+line"}) {
    const CurvatureData c = ModelSpace::parse(s).curvature();
    const int n = c.dim();
    for (int i = 0; i < 10; ++i, ++samples) {
      const CovariantTensor phi = random_tensor(n, 2, SymmetryClass::symmetric, rng);
      const CovariantTensor r2 = r2_apply(c, phi);
      const CovariantTensor w = weitzenboeck_apply(c, phi);
      worst_action = std::max(worst_action, (r2 - w).norm() / std::max(w.norm(), phi.norm()));
      const double q = inner_product(r2, phi);
      const double d = r2_quadratic_eigenframe(c, phi);
      worst_display = std::max(worst_display, std::abs(q - d) / std::max({std::abs(q), phi.norm() * phi.norm()}));
    }
    metric_image = std::max(metric_image, r2_apply(c, CovariantTensor::metric(n)).max_abs());
  }
  Tally t;
  t.require(samples >= 100, "only " + std::to_string(samples) + " samples");
  t.require(worst_action <= 1e-10, "action vs Weitzenböck " + fmt(worst_action));
  t.require(worst_display <= 1e-10, "action vs sectional display " + fmt(worst_display));
  t.require(metric_image == 0.0, "metric image " + fmt(metric_image));
  t.note(std::to_string(samples) + " tensors, action " + fmt(worst_action) + ", display " + fmt(worst_display) +
         ", max|R2(g)| = " + fmt(metric_image));
  return t.outcome();
}

// ---- 3 ----
Outcome betti_kernels() {
  Tally t;
  const int betti[] = {1, 2, 1};
  std::string dims;
  for (int p = 0; p <= 2; ++p) {
    const SpectralReport r = spectrum(assemble(torus(2, 32), p, SymmetryClass::alternating, OperatorKind::hodge), 5);
    t.require(r.kernel_dim == betti[p], "T2 p=" + std::to_string(p) + " kernel " + std::to_string(r.kernel_dim));
    t.require(max_residual(r) < 1e-9, "T2 p=" + std::to_string(p) + " residual " + fmt(max_residual(r)));
    dims += (p ? "," : "") + std::to_string(r.kernel_dim);
  }
  const SpectralReport s = spectrum(assemble(sphere(64), 1, SymmetryClass::alternating, OperatorKind::hodge), 4);
  const double rel = std::abs(s.eigenvalues[0] - 2.0) / 2.0;
  t.require(s.kernel_dim == 0, "S2 1-form kernel " + std::to_string(s.kernel_dim));
  t.require(rel <= 0.02, "S2 1-form smallest eigenvalue " + fmt(s.eigenvalues[0]));
  t.note("T2 kernels (" + dims + "), S2 1-forms kernel 0 with lambda_min = " + fmt(s.eigenvalues[0]));
  return t.outcome();
}

// ---- 4 ----
Outcome sphere_scalar_spectrum() {
  const SpectralReport r = spectrum(assemble(sphere(64), 0, SymmetryClass::general, OperatorKind::rough), 9);
  Tally t;
  t.require(std::abs(r.eigenvalues[0]) < 1e-8, "lambda_0 = " + fmt(r.eigenvalues[0]));
  double worst = 0.0;
  for (int i = 1; i < 9; ++i) {
    const double exact = i <= 3 ? 2.0 : 6.0;
    worst = std::max(worst, std::abs(r.eigenvalues[std::size_t(i)] - exact) / exact);
  }
  t.require(worst <= 0.01, "relative error " + fmt(worst));
  t.note("eigenvalues {0, 2x3, 6x5} to relative " + fmt(worst));
  return t.outcome();
}

// ---- 5 ----
Outcome flat_full_tensor_kernel() {
  const SpectralReport r =
      covering_spectrum(assemble(torus(2, 32), 2, SymmetryClass::general, OperatorKind::lichnerowicz, 1.0), 6);
  double worst = 0.0;
  for (const TensorField& f : r.kernel_basis) worst = std::max(worst, covariant_derivative(f).norm() / f.norm());
  Tally t;
  t.require(r.kernel_dim == 4, "kernel dim " + std::to_string(r.kernel_dim));
  t.require(worst < 1e-10, "max |DF| " + fmt(worst));
  t.note("kernel dim 4, max |DF|/|F| = " + fmt(worst));
  return t.outcome();
}

// ---- 6 ----
Outcome page_pope_witness() {
  const GridPtr g = torus(2, 32);
  TensorField phi = constant_field(g, CovariantTensor::from_components(2, 2, {1.0, 0.0, 0.0, -1.0},
                                                                        SymmetryClass::symmetric_traceless));
  phi.set_symmetry(SymmetryClass::symmetric);
  const TTDiagnostics d = tt_check(phi, 1e-12);
  const double residual = assemble(g, 2, SymmetryClass::symmetric, OperatorKind::lichnerowicz, 1.0).apply(phi).norm();
  Tally t;
  t.require(d.is_tt, "tt_check divergence " + fmt(d.divergence_norm) + " trace " + fmt(d.trace_norm));
  t.require(residual < 1e-10, "operator residual " + fmt(residual));
  t.note("TT (div " + fmt(d.divergence_norm) + ", trace " + fmt(d.trace_norm) + "), |Delta_L phi| = " + fmt(residual));
  return t.outcome();
}

// ---- 7 ----
Outcome bochner_identity() {
  Tally t;
  const int n_torus = 32;
  RandomFieldOptions band;
  band.bandwidth = std::min(3, n_torus / 4 - 1);
  double torus_worst = 0.0;
  for (int p = 0; p <= 2; ++p)
    for (double c : {-1.0, 1.0}) {
      const TensorField f = random_smooth_field(torus(2, n_torus), p, SymmetryClass::general, 700 + p, band);
      torus_worst = std::max(torus_worst, bochner_residual(f, c).max_abs());
    }
  t.require(torus_worst < 1e-8, "torus residual " + fmt(torus_worst));
  RandomFieldOptions smooth;
  smooth.pole_vanishing = true;
  double worst_ratio = 1e300;
  for (int p = 0; p <= 2; ++p) {
    const double coarse =
        bochner_residual(random_smooth_field(sphere(32), p, SymmetryClass::general, 710 + p, smooth), 1.0).max_abs();
    const double fine =
        bochner_residual(random_smooth_field(sphere(64), p, SymmetryClass::general, 710 + p, smooth), 1.0).max_abs();
    worst_ratio = std::min(worst_ratio, coarse / fine);
  }
  t.require(worst_ratio >= 3.5, "sphere refinement ratio " + fmt(worst_ratio));
  t.note("torus residual " + fmt(torus_worst) + ", sphere refinement ratio >= " + fmt(worst_ratio));
  return t.outcome();
}

// ---- 8 ----
Outcome kato_inequality() {
  Tally t;
  int fields = 0;
  double worst_torus = 1e300, worst_sphere = 1e300;
  for (int s = 0; s < 50; ++s) {
    const int p = 1 + s % 2;
    worst_torus = std::min(worst_torus, kato_gap(random_smooth_field(torus(2, 16), p, SymmetryClass::general, 800 + s)));
    worst_sphere = std::min(worst_sphere, kato_gap(random_smooth_field(sphere(16), p, SymmetryClass::general, 900 + s)));
    fields += 2;
  }
  t.require(worst_torus >= -1e-6, "torus gap " + fmt(worst_torus));
  t.require(worst_sphere >= -1e-6, "sphere gap " + fmt(worst_sphere));
  t.note(std::to_string(fields) + " fields, min gap torus " + fmt(worst_torus) + ", sphere " + fmt(worst_sphere));
  return t.outcome();
}

// ---- 9 ----
Outcome trace_commutation() {
  const double t2 = trace_commutation_residual(torus(2, 32));
  const double t3 = trace_commutation_residual(torus(3, 6));
  const double s2 = trace_commutation_residual(sphere(64));
  Tally t;
  t.require(std::max(t2, t3) < 1e-10, "torus residual " + fmt(std::max(t2, t3)));
  t.require(s2 < 1e-5, "sphere residual " + fmt(s2));
  t.note("T2 " + fmt(t2) + ", T3 " + fmt(t3) + ", S2 " + fmt(s2));
  return t.outcome();
}

// ---- 10 ----
Outcome einstein_relation() {
  const GridPtr g = sphere(32);
  const AssembledOperator l = assemble(g, 2, SymmetryClass::symmetric, OperatorKind::lichnerowicz, 1.0);
  const AssembledOperator e = assemble(g, 2, SymmetryClass::symmetric, OperatorKind::einstein);
  SparseMatrix id(l.stiffness.rows(), l.stiffness.cols());
  id.setIdentity();
  const double s = g->space().curvature().scalar();
  const SparseMatrix rest = l.matrix() - e.matrix() - (2.0 * s / 2.0) * id;
  double mx = 0.0;
  for (Eigen::Index col = 0; col < rest.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(rest, col); it; ++it) mx = std::max(mx, std::abs(it.value()));

  const GridPtr flat = torus(2, 16);
  const SpectralReport kernel =
      covering_spectrum(assemble(flat, 2, SymmetryClass::symmetric, OperatorKind::lichnerowicz, 1.0), 4);
  const AssembledOperator flat_e = assemble(flat, 2, SymmetryClass::symmetric, OperatorKind::einstein);
  const double link = einstein_eigen_link_residual(kernel, flat_e);
  const AssembledOperator flat_l = assemble(flat, 2, SymmetryClass::symmetric, OperatorKind::lichnerowicz, 1.0);
  // With s = 0 the predicted eigenvalue is exactly 0 and both operators share one matrix.
  const double predicted = lichnerowicz_einstein_eigen_link(flat->space().curvature().scalar(), 2);
  const bool same_matrix = (flat_e.matrix() - flat_l.matrix()).norm() == 0.0;
  Tally t;
  t.require(mx < 1e-12, "S2 max-norm " + fmt(mx));
  t.require(kernel.kernel_dim == 3, "flat symmetric kernel dim " + std::to_string(kernel.kernel_dim));
  t.require(predicted == 0.0 && same_matrix, "flat Delta_E differs from Delta_L");
  t.require(link < 1e-10, "flat eigen link " + fmt(link));
  t.note("S2 max-norm " + fmt(mx) + ", flat kernel dim 3 with |Delta_E F| <= " + fmt(link) + " |F|");
  return t.outcome();
}

// ---- 11 ----
bool has_note(const Verdict& v, const std::string& fragment) {
  return std::any_of(v.notes.begin(), v.notes.end(),
                     [&](const std::string& s) { return s.find(fragment) != std::string::npos; });
}

Outcome stability_verdicts() {
  Tally t;
  for (int n = 2; n <= 5; ++n) {
    const ModelSpace m = ModelSpace::space_form(n, 1.0);
    const Hypotheses h = evaluate_hypotheses(m, 1.0);
    const Verdict st = einstein_stability(m);
    const Verdict a0 = a0_criterion(m);
    const std::string tag = "S" + std::to_string(n);
    t.require(std::abs(h.k_min - 1.0) < 1e-12 && h.k_min > double(n - 1) / n, tag + " K_min " + fmt(h.k_min));
    t.require(std::abs(h.a0 + 1.0) < 1e-12 && h.a0 < (n - 1) / 2.0, tag + " a0 " + fmt(h.a0));
    t.require(st.predicted_kernel == PredictedKernel::trivial, tag + " stability verdict");
    t.require(st.rule_fired.find("not an unstable") != std::string::npos, tag + " stability conclusion");
    t.require(a0.predicted_kernel == PredictedKernel::trivial, tag + " a0 verdict");
  }
  std::vector<ModelSpace> negative;
  for (int n = 2; n <= 5; ++n) negative.push_back(ModelSpace::space_form(n, -1.0));
  negative.push_back(ModelSpace::parse("product:sphere2+sphere2"));
  for (const ModelSpace& m : negative) {
    const Verdict st = einstein_stability(m);
    t.require(st.predicted_kernel == PredictedKernel::no_prediction, m.spec_string() + " stability should not fire");
    t.require(has_note(st, "failing inequality"), m.spec_string() + " missing failing inequality");
  }
  t.note("S^2..S^5 not unstable (K_min = 1, a0 = -1); H^2..H^5 and S2xS2 no_prediction with failing inequality");
  return t.outcome();
}

// ---- 12 ----
Outcome soundness_sweep() {
  struct Target {
    const char* space;
    std::vector<int> res;
  };
  const Target targets[] = {{"torus:n=2", {16}}, {"torus:n=3", {6}}, {"sphere:n=2", {16, 32}}};
  const SymmetryClass classes[] = {SymmetryClass::general, SymmetryClass::symmetric, SymmetryClass::alternating,
                                   SymmetryClass::symmetric_traceless};
  Tally t;
  int checked = 0, vacuous = 0;
  for (const Target& target : targets) {
    const ModelSpace m = ModelSpace::parse(target.space);
    const GridPtr grid = Grid::make(m, target.res);
    for (int p = 1; p <= 2; ++p)  // the checker addresses tensors of order ≥ 1
      for (SymmetryClass cls : classes) {
        if (p < 2 && cls != SymmetryClass::general) continue;  // classes coincide below order 2
        if (!class_valid(m.dim(), p, cls)) continue;
        for (double c : {-1.0, 1.0}) {
          const Verdict v = classify_kernel(m, p, cls, c);
          const SpectralReport r =
              covering_spectrum(assemble(grid, p, cls, OperatorKind::lichnerowicz, c), int(ipow(m.dim(), p)) + 2);
          const SoundnessCheck s = check_soundness(v, r, soundness_tolerance(*grid));
          (v.predicted_kernel == PredictedKernel::no_prediction ? vacuous : checked) += 1;
          t.require(s.consistent, std::string(target.space) + " p=" + std::to_string(p) + " " +
                                      std::string(to_string(cls)) + " c=" + fmt(c) + ": " + s.detail);
        }
      }
  }
  t.note(std::to_string(checked) + " predictions consistent with computed kernels, " + std::to_string(vacuous) +
         " cases without prediction");
  return t.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Weitzenboeck cross-validation", weitzenboeck_cross_validation},
      {"symmetric 2-tensor forms", symmetric_two_tensor_forms},
      {"Betti-number kernels", betti_kernels},
      {"sphere scalar spectrum", sphere_scalar_spectrum},
      {"flat full-tensor kernel", flat_full_tensor_kernel},
      {"Page-Pope witness", page_pope_witness},
      {"Bochner identity", bochner_identity},
      {"Kato inequality", kato_inequality},
      {"trace commutation", trace_commutation},
      {"Einstein relation", einstein_relation},
      {"stability verdicts", stability_verdicts},
      {"checker soundness sweep", soundness_sweep},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
