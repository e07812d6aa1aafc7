#include "lich/cli.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "lich/checker.hpp"
#include "lich/diagnostics.hpp"
#include "lich/error.hpp"
#include "lich/kernels.hpp"
#include "lich/linalg.hpp"
#include "lich/model_space.hpp"
#include "lich/parallel.hpp"
#include "lich/spectrum.hpp"
#include "lich/weitzenboeck.hpp"

namespace lich::cli {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

// Pointwise agreement tolerance for the algebraic identity suite.
constexpr double kPointwiseTol = 1e-10;
// Random samples per (order, class) in the pointwise suites.
constexpr int kSamplesPerClass = 12;
constexpr int kQuadraticSamples = 100;

// ---- small JSON helpers ----

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json ascending(const Eigen::VectorXd& v) {
  std::vector<double> x(v.data(), v.data() + v.size());
  std::sort(x.begin(), x.end());
  return x;
}

json identity(std::string name, std::string checks, double value, double tolerance, bool pass,
              std::string comparison = "<=") {
  return {{"name", std::move(name)},   {"checks", std::move(checks)}, {"value", value},
          {"tolerance", tolerance},    {"comparison", std::move(comparison)}, {"pass", pass}};
}

json le(std::string name, std::string checks, double value, double tolerance) {
  return identity(std::move(name), std::move(checks), value, tolerance, value <= tolerance);
}

json ge(std::string name, std::string checks, double value, double bound) {
  return identity(std::move(name), std::move(checks), value, bound, value >= bound, ">=");
}

// ---- configuration ----

std::vector<int> default_resolution(const ModelSpace& space) {
  if (space.kind() == SpaceKind::round_sphere_2) return {32, 64};
  switch (space.dim()) {
    case 1: return {64};
    case 2: return {16};
    default: return {6};
  }
}

// Class and coupling actually used for the configured operator kind.
struct EffectiveOperator {
  SymmetryClass cls;
  double c;
};

EffectiveOperator effective_operator(OperatorKind kind, std::optional<SymmetryClass> cls, double c) {
  switch (kind) {
    case OperatorKind::rough: return {cls.value_or(SymmetryClass::general), 0.0};
    case OperatorKind::lichnerowicz: return {cls.value_or(SymmetryClass::general), c};
    case OperatorKind::hodge: return {SymmetryClass::alternating, 1.0};
    case OperatorKind::sampson: return {SymmetryClass::symmetric, -1.0};
    case OperatorKind::einstein: return {SymmetryClass::symmetric, 1.0};
  }
  return {SymmetryClass::general, c};
}

EffectiveOperator effective_operator(const RunConfig& cfg) { return effective_operator(cfg.kind, cfg.cls, cfg.c); }

json config_json(const RunConfig& cfg, const ModelSpace* space, const EffectiveOperator& eff,
                 const std::vector<int>& res) {
  json j;
  j["space"] = cfg.space;
  j["space_canonical"] = space ? json(space->spec_string()) : json(nullptr);
  j["task"] = std::string(to_string(cfg.task));
  j["p"] = cfg.p;
  j["class"] = std::string(to_string(eff.cls));
  j["c"] = eff.c;
  j["kind"] = std::string(to_string(cfg.kind));
  j["res"] = res;
  j["k"] = cfg.k;
  j["kernel_tol"] = cfg.kernel_tol ? json(*cfg.kernel_tol) : json(nullptr);
  j["seed"] = cfg.seed;
  j["out"] = cfg.out;
  return j;
}

// ---- curvature ----

json hypotheses_json(const Hypotheses& h) {
  return {{"n", h.n},
          {"c", h.c},
          {"curvature_operator_sign", std::string(to_string(h.curvature_operator_sign))},
          {"curvature_operator_min", h.lambda_min},
          {"curvature_operator_max", h.lambda_max},
          {"sectional_sign", std::string(to_string(h.sec_sign))},
          {"sectional_min", h.k_min},
          {"sectional_max", h.k_max},
          {"ricci_sign", std::string(to_string(h.ricci_sign))},
          {"ricci_min", h.ricci_min},
          {"ricci_max", h.ricci_max},
          {"scalar", h.scalar},
          {"a0", h.a0},
          {"compact", h.compact},
          {"complete", h.complete},
          {"simply_connected", h.simply_connected},
          {"volume_infinite", h.volume_infinite},
          {"einstein", h.einstein},
          {"holonomy_irreducible", h.holonomy_irreducible},
          {"sign_tolerance", 1e-10}};
}

json curvature_json(const ModelSpace& space, double c) {
  const CurvatureData curv = space.curvature();
  curv.validate(1e-12);
  const SecExtremes sec = sec_extremes(curv);
  json j;
  j["space"] = space.spec_string();
  j["kind"] = to_string(space.kind());
  j["dim"] = space.dim();
  j["symmetries_validated"] = true;
  j["symmetry_tolerance"] = 1e-12;
  j["ricci"] = to_json(curv.ricci());
  j["scalar"] = curv.scalar();
  j["einstein"] = space.einstein();
  j["einstein_constant"] = space.einstein_constant() ? json(*space.einstein_constant()) : json(nullptr);
  j["curvature_operator_eigenvalues"] = ascending(eigen_decompose_symmetric(curv.lambda2_matrix()).values);
  j["second_kind_eigenvalues"] = ascending(eigen_decompose_symmetric(curv.second_kind_matrix()).values);
  j["sectional_min"] = sec.k_min;
  j["sectional_max"] = sec.k_max;
  j["sectional_exact"] = sec.exact;
  j["a0"] = a0_estimate(curv);
  j["hypotheses"] = hypotheses_json(evaluate_hypotheses(space, c));
  return j;
}

// ---- pointwise identity suites ----

CovariantTensor random_tensor(int n, int p, SymmetryClass cls, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CovariantTensor t(n, p);
  for (double& x : t.components()) x = normal(rng);
  return cls == SymmetryClass::general ? t : project_symmetry(t, cls);
}

double curvature_scale(const CurvatureData& curv) {
  double m = 0.0;
  for (double r : curv.riemann_components()) m = std::max(m, std::abs(r));
  return m;
}

double relative(double a, double b, double scale) {
  const double d = std::abs(a - b);
  if (d == 0.0) return 0.0;
  return d / std::max({std::abs(a), std::abs(b), scale, 1e-300});
}

struct Agreement {
  double component_vs_commutator = 0.0;  // operator forms, relative to curvature·‖T‖
  double quadratic_vs_eigenframe = 0.0;  // quadratic forms, relative
  double self_adjointness = 0.0;         // ⟨ℜS,T⟩ − ⟨S,ℜT⟩, relative
  double min_quadratic = 0.0, max_quadratic = 0.0;  // over unit-norm samples
  int samples = 0;
};

Agreement weitzenboeck_agreement(const CurvatureData& curv, int p, SymmetryClass cls, int samples,
                                 std::mt19937_64& rng) {
  const int n = curv.dim();
  const double scale = curvature_scale(curv);
  Agreement a;
  a.min_quadratic = INFINITY;
  a.max_quadratic = -INFINITY;
  for (int s = 0; s < samples; ++s) {
    CovariantTensor t = random_tensor(n, p, cls, rng);
    t *= 1.0 / t.norm();
    const CovariantTensor u = random_tensor(n, p, cls, rng);
    const CovariantTensor rt = weitzenboeck_apply(curv, t);
    const CovariantTensor rc = weitzenboeck_apply_commutator_form(curv, t);
    const double op_scale = std::max(scale * t.norm(), std::max(rt.norm(), 1e-300));
    a.component_vs_commutator = std::max(a.component_vs_commutator, (rt - rc).norm() / op_scale);
    const double q1 = inner_product(t, rt);
    const double q2 = inner_product(t, rc);
    const double q3 = weitzenboeck_quadratic_eigenframe(curv, t);
    a.quadratic_vs_eigenframe =
        std::max({a.quadratic_vs_eigenframe, relative(q1, q3, scale), relative(q2, q3, scale)});
    const double su = inner_product(rt, u);
    const double us = inner_product(t, weitzenboeck_apply(curv, u));
    a.self_adjointness = std::max(a.self_adjointness, relative(su, us, scale * u.norm()));
    a.min_quadratic = std::min(a.min_quadratic, q1);
    a.max_quadratic = std::max(a.max_quadratic, q1);
    ++a.samples;
  }
  return a;
}

std::string suite_tag(int p, SymmetryClass cls) {
  return "p=" + std::to_string(p) + " class=" + std::string(to_string(cls));
}

void append_weitzenboeck_suite(json& ids, const CurvatureData& curv, int p, SymmetryClass cls, int samples,
                               std::mt19937_64& rng) {
  const Agreement a = weitzenboeck_agreement(curv, p, cls, samples, rng);
  const std::string tag = suite_tag(p, cls);
  ids.push_back(le("weitzenboeck_component_vs_commutator " + tag,
                   "component form and skew-endomorphism form of the Weitzenböck term agree",
                   a.component_vs_commutator, kPointwiseTol));
  ids.push_back(le("weitzenboeck_quadratic_vs_eigenframe " + tag,
                   "g(ℜT,T) equals the curvature-operator eigenframe sum", a.quadratic_vs_eigenframe,
                   kPointwiseTol));
  ids.push_back(le("weitzenboeck_self_adjoint " + tag, "g(ℜS,T) = g(S,ℜT)", a.self_adjointness, kPointwiseTol));
}

void append_r2_suite(json& ids, const CurvatureData& curv, SymmetryClass cls, int samples, std::mt19937_64& rng) {
  const int n = curv.dim();
  const double scale = curvature_scale(curv);
  double op = 0.0, quad = 0.0;
  for (int s = 0; s < samples; ++s) {
    CovariantTensor phi = random_tensor(n, 2, cls, rng);
    phi *= 1.0 / phi.norm();
    const CovariantTensor r2 = r2_apply(curv, phi);
    const CovariantTensor rp = weitzenboeck_apply(curv, phi);
    op = std::max(op, (r2 - rp).norm() / std::max(scale, 1e-300));
    quad = std::max(quad, relative(inner_product(phi, r2), r2_quadratic_eigenframe(curv, phi), scale));
  }
  const std::string tag = "class=" + std::string(to_string(cls));
  ids.push_back(le("r2_action_vs_weitzenboeck " + tag, "ℜ₂ on symmetric 2-tensors is the p=2 Weitzenböck term", op,
                   kPointwiseTol));
  ids.push_back(le("r2_quadratic_vs_sectional_display " + tag,
                   "g(ℜ₂φ,φ) = 2Σ_{i<j} sec(e_i∧e_j)(μ_i−μ_j)² in the eigenframe of φ", quad, kPointwiseTol));
}

json metric_annihilation(const CurvatureData& curv) {
  const double v = r2_apply(curv, CovariantTensor::metric(curv.dim())).max_abs();
  return le("r2_metric_zero", "ℜ₂(g) = 0", v, 0.0);
}

// ---- discretized helpers ----

// Spectrum whose requested count exceeds the kernel dimension, so that the
// kernel is not truncated by k.
SpectralReport spectrum_covering_kernel(const AssembledOperator& op, int k, std::optional<double> kernel_tol,
                                        std::uint64_t seed) {
  SpectrumOptions opt;
  opt.seed = seed;
  const int cap = int(std::min<std::size_t>(op.size() - 1, 4096));
  k = std::min(k, cap);
  for (;;) {
    SpectralReport r = spectrum(op, k, kernel_tol, opt);
    if (r.kernel_dim < k || k >= cap) return r;
    k = std::min(2 * k, cap);
  }
}

json spectrum_json(const AssembledOperator& op, const SpectralReport& r, int requested_k, const char* tol_rule) {
  json j;
  j["operator"] = {{"kind", std::string(to_string(op.kind))},
                   {"p", op.p},
                   {"class", std::string(to_string(op.cls))},
                   {"c", op.c},
                   {"identity_shift", op.shift},
                   {"resolution", op.grid->resolution_string()},
                   {"nodes", op.grid->node_count()},
                   {"unknowns", op.size()}};
  j["k_requested"] = requested_k;
  j["k"] = r.eigenvalues.size();
  j["eigenvalues"] = r.eigenvalues;
  j["residuals"] = r.residuals;
  j["residual_tolerance"] = 1e-7 * r.operator_norm;
  j["residual_tolerance_rule"] = "1e-7 * operator norm bound (quadrature norm, unit eigenvector)";
  j["kernel_dim"] = r.kernel_dim;
  j["kernel_tol"] = r.kernel_tol;
  j["kernel_tol_rule"] = tol_rule;
  j["kernel_dim_may_be_truncated"] = r.kernel_dim == int(r.eigenvalues.size());
  j["operator_norm"] = r.operator_norm;
  j["solver"] = {{"method", r.method}, {"shift", r.shift}, {"restarts", r.restarts}};
  return j;
}

const char* kernel_tol_rule(const RunConfig& cfg, const Grid& grid) {
  if (cfg.kernel_tol) return "user-supplied";
  return grid.is_torus() ? "1e-8 * max |eigenvalue| of the computed set"
                         : "1e-3 * first nonzero scalar eigenvalue on the same grid";
}

json verdict_json(const Verdict& v, const char* family) {
  return {{"family", family},
          {"predicted_kernel", std::string(to_string(v.predicted_kernel))},
          {"rule_label", v.rule_label},
          {"rule_fired", v.rule_fired},
          {"conclusion", v.conclusion},
          {"applies_to",
           {{"p", v.applies_to.p}, {"class", std::string(to_string(v.applies_to.cls))}, {"c", v.applies_to.c}}},
          {"numerically_checkable", v.numerically_checkable},
          {"notes", v.notes}};
}

// ---- tasks ----

struct Context {
  const RunConfig& cfg;
  const ModelSpace& space;
  EffectiveOperator eff;
  std::vector<int> res;
  json& report;
  GridPtr grid() const { return Grid::make(space, res); }
};

void run_quadratic_form(Context& ctx) {
  const CurvatureData curv = ctx.space.curvature();
  const int n = curv.dim();
  const int p = ctx.cfg.p;
  const SymmetryClass cls = ctx.eff.cls;
  if (!class_valid(n, p, cls))
    fail(ErrorKind::config, "class " + std::string(to_string(cls)) + " is not valid for p=" + std::to_string(p) +
                                " on dimension " + std::to_string(n));
  std::mt19937_64 rng(ctx.cfg.seed);
  const Agreement a = weitzenboeck_agreement(curv, p, cls, kQuadraticSamples, rng);

  // Exact range of g(ℜT,T) on unit tensors of the class.
  const Eigen::MatrixXd& b = class_basis(n, p, cls);
  const Eigen::MatrixXd m = weitzenboeck_matrix(curv, p);
  const Eigen::MatrixXd restricted = b.transpose() * (0.5 * (m + m.transpose())) * b;
  const Eigen::VectorXd ev = eigen_decompose_symmetric(restricted).values;
  const double lo = ev.size() ? ev.minCoeff() : 0.0, hi = ev.size() ? ev.maxCoeff() : 0.0;
  ctx.report["curvature"]["quadratic_form"] = {{"p", p},
                                               {"class", std::string(to_string(cls))},
                                               {"samples", a.samples},
                                               {"sampled_min", a.min_quadratic},
                                               {"sampled_max", a.max_quadratic},
                                               {"range_min", lo},
                                               {"range_max", hi},
                                               {"sign", std::string(to_string(classify_sign(lo, hi)))}};
  json& ids = ctx.report["identities"];
  const std::string tag = suite_tag(p, cls);
  ids.push_back(le("weitzenboeck_component_vs_commutator " + tag,
                   "component form and skew-endomorphism form of the Weitzenböck term agree",
                   a.component_vs_commutator, kPointwiseTol));
  ids.push_back(le("weitzenboeck_quadratic_vs_eigenframe " + tag,
                   "g(ℜT,T) equals the curvature-operator eigenframe sum", a.quadratic_vs_eigenframe,
                   kPointwiseTol));
  const double scale = std::max(curvature_scale(curv), 1.0);
  ids.push_back(le("quadratic_samples_within_range " + tag, "sampled g(ℜT,T) lies in the exact eigenvalue range",
                   std::max({0.0, lo - a.min_quadratic, a.max_quadratic - hi}), 1e-10 * scale));
  if (p == 2 && (cls == SymmetryClass::symmetric || cls == SymmetryClass::symmetric_traceless)) {
    append_r2_suite(ids, curv, cls, kQuadraticSamples, rng);
    ids.push_back(metric_annihilation(curv));
  }
}

void run_spectrum(Context& ctx) {
  if (!ctx.space.discretizable())
    fail(ErrorKind::capability, "space " + ctx.space.spec_string() + " has no field discretization");
  const GridPtr grid = ctx.grid();
  const AssembledOperator op = assemble(grid, ctx.cfg.p, ctx.eff.cls, ctx.cfg.kind, ctx.eff.c);
  SpectrumOptions opt;
  opt.seed = ctx.cfg.seed;
  const SpectralReport r = spectrum(op, ctx.cfg.k, ctx.cfg.kernel_tol, opt);
  ctx.report["spectrum"] = spectrum_json(op, r, ctx.cfg.k, kernel_tol_rule(ctx.cfg, *grid));
}

void run_check(Context& ctx) {
  json& verdicts = ctx.report["verdicts"];
  json& ids = ctx.report["identities"];
  const bool stability = ctx.cfg.kind == OperatorKind::einstein || ctx.space.einstein();
  if (ctx.cfg.kind == OperatorKind::einstein) {
    verdicts.push_back(verdict_json(einstein_stability(ctx.space), "einstein_stability"));
    verdicts.push_back(verdict_json(a0_criterion(ctx.space), "a0_criterion"));
    return;
  }
  if (ctx.cfg.p < 1) fail(ErrorKind::config, "task check needs p >= 1");
  const Verdict v = classify_kernel(ctx.space, ctx.cfg.p, ctx.eff.cls, ctx.eff.c);
  verdicts.push_back(verdict_json(v, "kernel"));
  if (stability) {
    verdicts.push_back(verdict_json(einstein_stability(ctx.space), "einstein_stability"));
    verdicts.push_back(verdict_json(a0_criterion(ctx.space), "a0_criterion"));
  }

  // Compare the kernel verdict against the computed kernel when possible.
  std::string skipped;
  if (!v.numerically_checkable) skipped = "verdict is analytic only";
  else if (!ctx.space.discretizable()) skipped = "space has no field discretization";
  else if (ctx.cfg.p > 2) skipped = "kernels are computed for p <= 2 only";
  if (!skipped.empty()) {
    ctx.report["checks_skipped"].push_back({{"check", "verdict_soundness"}, {"reason", skipped}});
    return;
  }
  const GridPtr grid = ctx.grid();
  const AssembledOperator op = assemble(grid, ctx.cfg.p, ctx.eff.cls, OperatorKind::lichnerowicz, ctx.eff.c);
  const SpectralReport r = spectrum_covering_kernel(op, ctx.cfg.k, ctx.cfg.kernel_tol, ctx.cfg.seed);
  ctx.report["spectrum"] = spectrum_json(op, r, ctx.cfg.k, kernel_tol_rule(ctx.cfg, *grid));
  const double tol = soundness_tolerance(*grid);
  const SoundnessCheck s = check_soundness(v, r, tol);
  json entry = identity("verdict_soundness", "computed kernel is consistent with " +
                                                 (v.rule_label.empty() ? std::string("no prediction") : v.rule_label),
                        s.measure, tol, s.consistent);
  entry["detail"] = s.detail;
  ids.push_back(std::move(entry));
}

void append_discretized_suite(Context& ctx, json& ids) {
  const int p = ctx.cfg.p;
  const std::uint64_t seed = ctx.cfg.seed;
  const GridPtr grid = ctx.grid();
  const std::string at = " @" + grid->resolution_string();
  if (p > 2) {
    ctx.report["checks_skipped"].push_back(
        {{"check", "discretized identities"}, {"reason", "fields are discretized for p <= 2 only"}});
  } else if (grid->is_torus()) {
    // Band-limited fields are resolved exactly by the collocation derivatives.
    const int minres = *std::min_element(grid->resolution().begin(), grid->resolution().end());
    RandomFieldOptions o;
    o.bandwidth = std::max(1, std::min(3, minres / 4 - 1));
    const TensorField f = random_smooth_field(grid, p, SymmetryClass::general, seed, o);
    ids.push_back(le("bochner_residual p=" + std::to_string(p) + at,
                     "½Δ‖F‖² + g(Δ_L F,F) − ‖∇F‖² − c g(ℜF,F) = 0 on a band-limited field",
                     bochner_residual(f, ctx.eff.c).max_abs(), 1e-8));
  } else {
    // Second-order grid: the residual must shrink at the truncation rate.
    const int base = std::clamp(grid->resolution()[0], 32, kMaxSphereTheta / 2);
    RandomFieldOptions o;
    o.pole_vanishing = true;
    auto residual = [&](int nt) {
      const GridPtr g = Grid::make(ctx.space, {nt, 2 * nt});
      return bochner_residual(random_smooth_field(g, p, SymmetryClass::general, seed, o), ctx.eff.c).max_abs();
    };
    const double coarse = residual(base), fine = residual(2 * base);
    json e = ge("bochner_refinement_ratio p=" + std::to_string(p) + " @" + std::to_string(base) + "x" +
                    std::to_string(2 * base) + "->" + std::to_string(2 * base) + "x" + std::to_string(4 * base),
                "sup-norm Bochner residual decreases under 2x refinement", fine > 0 ? coarse / fine : INFINITY, 3.5);
    e["coarse_residual"] = coarse;
    e["fine_residual"] = fine;
    ids.push_back(std::move(e));
  }
  if (p <= 2) {
    double gap = INFINITY;
    for (int s = 0; s < 4; ++s)
      gap = std::min(gap, kato_gap(random_smooth_field(grid, p, SymmetryClass::general, seed + 101 + s)));
    ids.push_back(ge("kato_gap p=" + std::to_string(p) + at, "‖∇F‖² ≥ ‖d‖F‖‖² wherever F ≠ 0", gap, -1e-6));
  }
  const double trace_tol = grid->is_torus() ? 1e-10 : 1e-5;
  ids.push_back(le("trace_commutation" + at, "trace_g(Δ_L φ) = Δ̄ trace_g(φ) for c = 1",
                   trace_commutation_residual(grid, seed), trace_tol));

  if (ctx.space.einstein()) {
    const AssembledOperator lich = assemble(grid, 2, SymmetryClass::symmetric, OperatorKind::lichnerowicz, 1.0);
    const AssembledOperator ein = assemble(grid, 2, SymmetryClass::symmetric, OperatorKind::einstein);
    const SparseMatrix diff = lich.matrix() - ein.matrix();
    SparseMatrix id(diff.rows(), diff.cols());
    id.setIdentity();
    const SparseMatrix rest = diff - ein.shift * id;
    double mx = 0.0;
    for (Eigen::Index col = 0; col < rest.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(rest, col); it; ++it) mx = std::max(mx, std::abs(it.value()));
    ids.push_back(le("einstein_relation" + at, "Δ_L(c=1) − Δ_E = (2s/n)·Id on symmetric 2-tensors", mx, 1e-12));

    const SpectralReport kernel = spectrum_covering_kernel(lich, 4, std::nullopt, seed);
    const double link = einstein_eigen_link_residual(kernel, ein);
    json e = le("einstein_eigen_link" + at, "Δ_E F = −(2s/n) F for every F in Ker Δ_L", link,
                soundness_tolerance(*grid));
    e["kernel_dim"] = kernel.kernel_dim;
    e["eigenvalue"] = lichnerowicz_einstein_eigen_link(ctx.space.curvature().scalar(), ctx.space.dim());
    ids.push_back(std::move(e));
  }
}

void run_verify_identities(Context& ctx) {
  const CurvatureData curv = ctx.space.curvature();
  const int n = curv.dim();
  json& ids = ctx.report["identities"];
  std::mt19937_64 rng(ctx.cfg.seed);
  ids.push_back(le("eigenframe_normalization", "normalization constant reproduces the 1-form calibration",
                   std::abs(calibrate_eigenframe_normalization(n) - kEigenframeNormalization), 1e-12));
  for (int p = 1; p <= 3; ++p) {
    for (SymmetryClass cls : {SymmetryClass::general, SymmetryClass::symmetric, SymmetryClass::alternating}) {
      if (p == 1 && cls != SymmetryClass::general) continue;  // all classes coincide for p = 1
      if (!class_valid(n, p, cls)) continue;
      append_weitzenboeck_suite(ids, curv, p, cls, kSamplesPerClass, rng);
    }
  }
  append_r2_suite(ids, curv, SymmetryClass::symmetric, kSamplesPerClass, rng);
  ids.push_back(metric_annihilation(curv));
  if (ctx.space.discretizable()) append_discretized_suite(ctx, ids);
  else
    ctx.report["checks_skipped"].push_back(
        {{"check", "discretized identities"}, {"reason", "space has no field discretization"}});
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::capability: return kCapabilityError;
    case ErrorKind::solver: return kSolverError;
    default: return kConfigError;
  }
}

}  // namespace

std::string_view to_string(Task task) noexcept {
  switch (task) {
    case Task::curvature: return "curvature";
    case Task::quadratic_form: return "quadratic-form";
    case Task::spectrum: return "spectrum";
    case Task::check: return "check";
    case Task::verify_identities: return "verify-identities";
  }
  return "curvature";
}

Task parse_task(std::string_view name) {
  for (Task t : {Task::curvature, Task::quadratic_form, Task::spectrum, Task::check, Task::verify_identities})
    if (to_string(t) == name) return t;
  fail(ErrorKind::config, "unknown task '" + std::string(name) + "'");
}

std::vector<int> parse_resolution(std::string_view text) {
  std::vector<int> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) fail(ErrorKind::config, "malformed resolution '" + std::string(text) + "'");
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || v < 1) fail(ErrorKind::config, "malformed resolution '" + std::string(text) + "'");
    out.push_back(v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == 'x' || ch == 'X' || ch == ',') flush();
    else if (ch != ' ') token += ch;
  }
  flush();
  return out;
}

void validate(const RunConfig& cfg) {
  if (cfg.space.empty()) fail(ErrorKind::config, "a space is required");
  if (cfg.p < 0 || cfg.p > kMaxOrder) fail(ErrorKind::config, "p must lie in [0, " + std::to_string(kMaxOrder) + "]");
  if (cfg.k < 1) fail(ErrorKind::config, "k must be positive");
  if (cfg.kernel_tol && !(*cfg.kernel_tol > 0.0 && std::isfinite(*cfg.kernel_tol)))
    fail(ErrorKind::config, "kernel-tol must be positive");
  if (!std::isfinite(cfg.c)) fail(ErrorKind::config, "c must be finite");
  if (cfg.out.empty()) fail(ErrorKind::config, "an output path is required");
  for (int r : cfg.resolution)
    if (r < 1) fail(ErrorKind::config, "resolution entries must be positive");
  if (cfg.cls) {
    const SymmetryClass forced = effective_operator(cfg.kind, std::nullopt, cfg.c).cls;
    const bool preset = cfg.kind == OperatorKind::hodge || cfg.kind == OperatorKind::sampson ||
                        cfg.kind == OperatorKind::einstein;
    if (preset && *cfg.cls != forced)
      fail(ErrorKind::config, "kind " + std::string(to_string(cfg.kind)) + " acts on class " +
                                  std::string(to_string(forced)) + ", not " + std::string(to_string(*cfg.cls)));
  }
  if (cfg.task == Task::check && cfg.kind != OperatorKind::einstein && cfg.p < 1)
    fail(ErrorKind::config, "task check needs p >= 1");
  if (cfg.task == Task::spectrum && cfg.kind == OperatorKind::einstein && cfg.p != 2)
    fail(ErrorKind::config, "kind einstein needs p = 2");
}

ParseOutcome parse_command_line(int argc, const char* const* argv) {
  CLI::App app{"Lichnerowicz Laplacians on model spaces: curvature, spectra and vanishing-theorem checks", "lich"};
  app.set_config("--config", "", "Read options from a TOML/INI file whose keys match the long flag names");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string space, task, cls, kind = "lichnerowicz", res, out = "lich_report.json";
  int p = 1, k = 6;
  double c = 1.0;
  std::optional<double> kernel_tol;
  std::uint64_t seed = 0;
  app.add_option("--space", space, "Catalog space, e.g. sphere:n=3,k=1 or torus:n=2")->required();
  app.add_option("--task", task, "curvature | quadratic-form | spectrum | check | verify-identities")
      ->required()
      ->check(CLI::IsMember({"curvature", "quadratic-form", "spectrum", "check", "verify-identities"}));
  app.add_option("--p", p, "Tensor order")->capture_default_str();
  app.add_option("--class", cls, "general | symmetric | alternating | symmetric_traceless")
      ->check(CLI::IsMember({"general", "symmetric", "alternating", "symmetric_traceless"}));
  app.add_option("--c", c, "Weitzenböck coupling of Δ_L = Δ̄ + cℜ")->capture_default_str();
  app.add_option("--kind", kind, "rough | lichnerowicz | hodge | sampson | einstein")
      ->capture_default_str()
      ->check(CLI::IsMember({"rough", "lichnerowicz", "hodge", "sampson", "einstein"}));
  app.add_option("--res", res, "Grid resolution: N, NxM or N,M,…");
  app.add_option("--k", k, "Number of eigenvalues")->capture_default_str();
  app.add_option("--kernel-tol", kernel_tol, "Eigenvalues below this magnitude count as kernel");
  app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--out", out, "Report path (JSON); the CSV summary goes next to it")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return {std::nullopt, code == 0 ? kOk : kConfigError};
  }
  try {
    RunConfig cfg;
    cfg.space = space;
    cfg.task = parse_task(task);
    cfg.p = p;
    if (!cls.empty()) cfg.cls = parse_symmetry_class(cls);
    cfg.c = c;
    cfg.kind = parse_operator_kind(kind);
    if (!res.empty()) cfg.resolution = parse_resolution(res);
    cfg.k = k;
    cfg.kernel_tol = kernel_tol;
    cfg.seed = seed;
    cfg.out = out;
    validate(cfg);
    return {cfg, kOk};
  } catch (const Error& e) {
    std::cerr << "lich: " << e.what() << "\n";
    return {std::nullopt, kConfigError};
  }
}

RunResult execute(const RunConfig& cfg) {
  RunResult result;
  json& report = result.report;
  report["report"] = {{"tool", "lich"},
                      {"version", kVersion},
                      {"timestamp", utc_timestamp()},
                      {"versions",
                       {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                      "." + std::to_string(EIGEN_MINOR_VERSION)},
                        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                        {"cli11", CLI11_VERSION}}},
                      {"runtime",
                       {{"threads", thread_count()}, {"simd", kernels::isa_name(kernels::active_isa())}}}};
  report["config"] = config_json(cfg, nullptr, effective_operator(cfg), cfg.resolution);
  report["curvature"] = nullptr;
  report["spectrum"] = nullptr;
  report["verdicts"] = json::array();
  report["identities"] = json::array();
  try {
    validate(cfg);
    const ModelSpace space = ModelSpace::parse(cfg.space);
    const EffectiveOperator eff = effective_operator(cfg);
    std::vector<int> res = cfg.resolution;
    if (res.empty() && space.discretizable()) res = default_resolution(space);
    report["config"] = config_json(cfg, &space, eff, res);
    report["curvature"] = curvature_json(space, eff.c);
    Context ctx{cfg, space, eff, res, report};
    switch (cfg.task) {
      case Task::curvature: break;
      case Task::quadratic_form: run_quadratic_form(ctx); break;
      case Task::spectrum: run_spectrum(ctx); break;
      case Task::check: run_check(ctx); break;
      case Task::verify_identities: run_verify_identities(ctx); break;
    }
    bool all_pass = true;
    for (const json& id : report["identities"]) all_pass = all_pass && id.at("pass").get<bool>();
    result.status = all_pass ? kOk : kIdentityFailure;
  } catch (const Error& e) {
    result.status = status_for(e.kind());
    report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    result.status = kIdentityFailure;
    report["error"] = {{"kind", "internal"}, {"message", e.what()}};
  }
  report["status"] = {{"exit_code", result.status},
                      {"all_checks_passed", result.status == kOk}};
  return result;
}

int run(const RunConfig& cfg) {
  RunResult result = execute(cfg);
  try {
    write_report(result.report, cfg.out);
  } catch (const std::exception& e) {
    std::cerr << "lich: " << e.what() << "\n";
    return kConfigError;
  }
  std::cout << summary_text(result.report);
  if (result.report.contains("error"))
    std::cerr << "lich: " << result.report["error"]["kind"].get<std::string>() << " error: "
              << result.report["error"]["message"].get<std::string>() << "\n";
  return result.status;
}

int main(int argc, const char* const* argv) {
  const ParseOutcome parsed = parse_command_line(argc, argv);
  if (!parsed.config) return parsed.status;
  return run(*parsed.config);
}

}  // namespace lich::cli
