#include "lich/checker.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "lich/error.hpp"
#include "lich/linalg.hpp"
#include "lich/weitzenboeck.hpp"

namespace lich {
namespace {

constexpr double kTol = 1e-10;

// Sign of c under which the constant-components rule for the Sampson Laplacian
// is stated ("with c > 0"), kept explicit because the same operator is
// introduced elsewhere with c = −1.
constexpr double kSampsonCSign = +1.0;

constexpr const char* kAnalyticNote = "analytic prediction — not numerically checked";
constexpr const char* kSampsonNote =
    "the constant-components rule for the Sampson Laplacian is stated with c > 0, while the Sampson Laplacian "
    "is introduced with c = -1; the rule is encoded with c-sign +1 as stated";

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << (x == 0.0 ? 0.0 : x);
  return os.str();
}

bool is_symmetric_family(SymmetryClass cls) {
  return cls == SymmetryClass::symmetric || cls == SymmetryClass::symmetric_traceless;
}

struct Rule {
  const char* label;
  const char* anchor;
  PredictedKernel conclusion;
  const char* text;
  std::function<bool(const Hypotheses&, int, SymmetryClass)> holds;
  const char* note = nullptr;
};

bool nonneg(SignClass s) { return sign_nonnegative(s); }
bool nonpos(SignClass s) { return sign_nonpositive(s); }
bool pos(SignClass s) { return s == SignClass::positive_somewhere; }
bool neg(SignClass s) { return s == SignClass::negative_somewhere; }

const std::vector<Rule>& rules() {
  using H = Hypotheses;
  using C = SymmetryClass;
  static const std::vector<Rule> table = {
      // ---- conclusion: trivial kernel ----
      {"Remark 1", "if the Ricci curvature is positive at some point of (M,g) or the holonomy of (M,g) is irreducible "
                   "then the vector space L^2(Ker Δ_L) is trivial",
       PredictedKernel::trivial, "no nonzero harmonic 1-forms",
       [](const H& h, int p, C) {
         return p == 1 && h.c == 1.0 && h.complete && nonneg(h.ricci_sign) &&
                (pos(h.ricci_sign) || h.holonomy_irreducible);
       }},
      {"Theorem 3.1", "φ is a constant multiple of g at each point of U", PredictedKernel::trivial,
       "kernel is trivial (the only trace-free multiple of g is 0)",
       [](const H& h, int p, C cls) {
         return p == 2 && cls == C::symmetric_traceless && h.compact && h.c > 0 && nonneg(h.sec_sign) &&
                (pos(h.sec_sign) || h.holonomy_irreducible);
       },
       "conclusion restricted to trace-free symmetric tensors"},
      {"Corollary 3.1", "the vector space L^q(Ker Δ_L) is trivial for an arbitrary q ∈ [1,+∞)", PredictedKernel::trivial,
       "no nonzero L^q harmonic symmetric tensors",
       [](const H& h, int p, C cls) {
         return p >= 2 && is_symmetric_family(cls) && h.complete && !h.compact && nonneg(h.sec_sign) && h.c > 0;
       }},
      {"Corollary 3.2", "if vol(M,g) = +∞, then L^q(Ker Δ_L) is trivial", PredictedKernel::trivial,
       "no nonzero L^q harmonic trace-free symmetric tensors",
       [](const H& h, int p, C cls) {
         return p >= 2 && cls == C::symmetric_traceless && h.complete && !h.compact && nonpos(h.sec_sign) &&
                h.c < 0 && h.volume_infinite;
       }},
      {"Corollary (n = 3, Ric ≤ s/2·g)", "If the Ricci curvature Ric and the scalar curvature s of (M, g) satisfy the "
                                         "inequality Ric ≤ (1/2)s g, then the vector space L^2(Ker Δ_L) is trivial",
       PredictedKernel::trivial, "no nonzero L^2 harmonic symmetric 2-tensors",
       [](const H& h, int p, C cls) {
         return h.n == 3 && p == 2 && is_symmetric_family(cls) && h.complete && !h.compact && h.c > 0 &&
                h.ricci_max <= 0.5 * h.scalar + kTol;
       },
       "c > 0 is taken from the subharmonicity argument that precedes the statement"},
      {"Corollary 2.3", "if R̄ ≥ k > 0 at some point x ∈ M and T ∈ C^∞(Λ_p M) for all p ∈ {1,…,n−1} then T ≡ 0",
       PredictedKernel::trivial, "no nonzero harmonic p-forms",
       [](const H& h, int p, C cls) {
         return p >= 2 && cls == C::alternating && p <= h.n - 1 && h.compact && pos(h.curvature_operator_sign) &&
                h.c > 0;
       }},
      {"Corollary 2.5", "if R̄ ≤ k < 0 at some point x ∈ M and T ∈ C^∞(Λ_p M) for all p ∈ {1,…,n−1} then T ≡ 0",
       PredictedKernel::trivial, "no nonzero harmonic p-forms",
       [](const H& h, int p, C cls) {
         return p >= 2 && cls == C::alternating && p <= h.n - 1 && h.compact && neg(h.curvature_operator_sign) &&
                h.c < 0;
       }},
      {"Theorem 2.3", "Then the vector space L^q(Ker Δ_L) is trivial for an arbitrary 1 ≤ q < +∞",
       PredictedKernel::trivial, "no nonzero L^q harmonic tensors",
       [](const H& h, int p, C) {
         return p >= 2 && h.complete && !h.compact && nonneg(h.curvature_operator_sign) && h.c > 0;
       }},
      {"Theorem 2.5", "In particular, if vol(M,g) = +∞, then T ≡ 0", PredictedKernel::trivial,
       "no nonzero L^q harmonic tensors",
       [](const H& h, int p, C) {
         return p >= 2 && h.complete && h.simply_connected && nonpos(h.curvature_operator_sign) && h.c < 0 &&
                h.volume_infinite;
       }},
      {"Theorem 2.5", "if R̄ ≤ k < 0 at some point x ∈ M and T ∈ C^∞(Λ^p M) for all p ∈ {1,…,n−1} then T ≡ 0",
       PredictedKernel::trivial, "no nonzero L^q harmonic p-forms",
       [](const H& h, int p, C cls) {
         return p >= 2 && cls == C::alternating && p <= h.n - 1 && h.complete && h.simply_connected &&
                neg(h.curvature_operator_sign) && h.c < 0;
       }},
      // ---- conclusion: constant multiples of the metric ----
      {"Theorem 3.1", "φ is a constant multiple of g at each point of U", PredictedKernel::constant_multiple_of_metric,
       "every harmonic symmetric 2-tensor is μ·g with μ constant",
       [](const H& h, int p, C cls) {
         return p == 2 && cls == C::symmetric && h.compact && h.c > 0 && nonneg(h.sec_sign) &&
                (pos(h.sec_sign) || h.holonomy_irreducible);
       }},
      // ---- conclusion: parallel tensors ----
      {"Remark 1", "L^2(Ker Δ_L) consists of parallel one-forms on (M,g)", PredictedKernel::parallel_only,
       "harmonic 1-forms are parallel",
       [](const H& h, int p, C) { return p == 1 && h.c == 1.0 && h.complete && nonneg(h.ricci_sign); }},
      {"Corollary 3.2", "the vector space L^q(Ker Δ_L) for any q ∈ (0,+∞) consists of parallel tensor fields",
       PredictedKernel::parallel_only, "L^q harmonic trace-free symmetric tensors are parallel",
       [](const H& h, int p, C cls) {
         return p >= 2 && cls == C::symmetric_traceless && h.complete && !h.compact && nonpos(h.sec_sign) && h.c < 0;
       }},
      {"Corollary 2.3", "T is invariant under parallel translation", PredictedKernel::parallel_only,
       "harmonic tensors are parallel (constant norm)",
       [](const H& h, int p, C) { return p >= 2 && h.compact && nonneg(h.curvature_operator_sign) && h.c > 0; }},
      {"Theorem 3.7", "consists of constant symmetric 2-tensors", PredictedKernel::constant_components,
       "harmonic symmetric 2-tensors have constant components",
       [](const H& h, int p, C cls) {
         return p == 2 && is_symmetric_family(cls) && h.compact && nonneg(h.sec_sign) && h.c * kSampsonCSign > 0;
       },
       kSampsonNote},
      {"Corollary 2.5", "T is invariant under parallel translation", PredictedKernel::parallel_only,
       "harmonic tensors are parallel (constant norm)",
       [](const H& h, int p, C) { return p >= 2 && h.compact && nonpos(h.curvature_operator_sign) && h.c < 0; }},
      {"Theorem 2.5", "then ‖T‖ is a constant function and T is invariant under parallel translation",
       PredictedKernel::parallel_only, "L^q harmonic tensors are parallel",
       [](const H& h, int p, C) {
         return p >= 2 && h.complete && h.simply_connected && nonpos(h.curvature_operator_sign) && h.c < 0;
       }},
  };
  return table;
}

std::string hypothesis_summary(const Hypotheses& h) {
  std::ostringstream os;
  os << "R̄ eigenvalues in [" << fmt(h.lambda_min) << ", " << fmt(h.lambda_max) << "] ("
     << to_string(h.curvature_operator_sign) << "); sec in [" << fmt(h.k_min) << ", " << fmt(h.k_max) << "] ("
     << to_string(h.sec_sign) << "); Ric eigenvalues in [" << fmt(h.ricci_min) << ", " << fmt(h.ricci_max) << "] ("
     << to_string(h.ricci_sign) << "); s = " << fmt(h.scalar) << "; compact=" << h.compact
     << " simply_connected=" << h.simply_connected << " volume_infinite=" << h.volume_infinite
     << " holonomy_irreducible=" << h.holonomy_irreducible;
  return os.str();
}

void require_einstein(const ModelSpace& space, const char* what) {
  if (!space.einstein())
    fail(ErrorKind::capability, std::string(what) + ": " + space.spec_string() + " is not an Einstein space");
}

}  // namespace

std::string_view to_string(SignClass s) noexcept {
  switch (s) {
    case SignClass::zero: return "zero";
    case SignClass::nonnegative: return ">=0";
    case SignClass::positive_somewhere: return ">0 somewhere";
    case SignClass::nonpositive: return "<=0";
    case SignClass::negative_somewhere: return "<0 somewhere";
    case SignClass::indefinite: return "indefinite";
  }
  return "?";
}

SignClass classify_sign(double min, double max, double tol) noexcept {
  if (std::abs(min) <= tol && std::abs(max) <= tol) return SignClass::zero;
  if (min > tol) return SignClass::positive_somewhere;
  if (min >= -tol) return SignClass::nonnegative;
  if (max < -tol) return SignClass::negative_somewhere;
  if (max <= tol) return SignClass::nonpositive;
  return SignClass::indefinite;
}

bool sign_nonnegative(SignClass s) noexcept {
  return s == SignClass::zero || s == SignClass::nonnegative || s == SignClass::positive_somewhere;
}

bool sign_nonpositive(SignClass s) noexcept {
  return s == SignClass::zero || s == SignClass::nonpositive || s == SignClass::negative_somewhere;
}

Hypotheses evaluate_hypotheses(const ModelSpace& space, double c, const HypothesisOverrides& o) {
  const CurvatureData curv = space.curvature();
  Hypotheses h;
  h.n = space.dim();
  h.c = c;
  const SymmetricEigen lam = eigen_decompose_symmetric(curv.lambda2_matrix());
  h.lambda_max = lam.values(0);
  h.lambda_min = lam.values(lam.values.size() - 1);
  const SymmetricEigen ric = eigen_decompose_symmetric(curv.ricci());
  h.ricci_max = ric.values(0);
  h.ricci_min = ric.values(ric.values.size() - 1);
  const SecExtremes sec = sec_extremes(curv);
  h.k_min = sec.k_min;
  h.k_max = sec.k_max;
  h.scalar = curv.scalar();
  h.a0 = a0_estimate(curv);
  h.curvature_operator_sign = o.curvature_operator_sign.value_or(classify_sign(h.lambda_min, h.lambda_max));
  h.sec_sign = o.sec_sign.value_or(classify_sign(h.k_min, h.k_max));
  h.ricci_sign = o.ricci_sign.value_or(classify_sign(h.ricci_min, h.ricci_max));
  h.compact = o.compact.value_or(space.compact());
  h.complete = o.complete.value_or(space.complete());
  h.simply_connected = o.simply_connected.value_or(space.simply_connected());
  h.volume_infinite = o.volume_infinite.value_or(space.volume_infinite());
  h.einstein = o.einstein.value_or(space.einstein());
  h.holonomy_irreducible = o.holonomy_irreducible.value_or(space.holonomy_irreducible());
  return h;
}

std::string_view to_string(PredictedKernel k) noexcept {
  switch (k) {
    case PredictedKernel::trivial: return "trivial";
    case PredictedKernel::parallel_only: return "parallel_only";
    case PredictedKernel::constant_multiple_of_metric: return "constant_multiple_of_metric";
    case PredictedKernel::constant_components: return "constant_components";
    case PredictedKernel::no_prediction: return "no_prediction";
  }
  return "?";
}

int strength(PredictedKernel k) noexcept {
  switch (k) {
    case PredictedKernel::trivial: return 3;
    case PredictedKernel::constant_multiple_of_metric: return 2;
    case PredictedKernel::parallel_only:
    case PredictedKernel::constant_components: return 1;
    case PredictedKernel::no_prediction: return 0;
  }
  return 0;
}

Verdict classify_kernel(const ModelSpace& space, int p, SymmetryClass cls, double c,
                        const HypothesisOverrides& overrides) {
  if (p < 1) fail(ErrorKind::order, "classify_kernel needs p >= 1");
  if (!class_valid(space.dim(), p, cls))
    fail(ErrorKind::shape, "symmetry class " + std::string(to_string(cls)) + " is not valid for n=" +
                               std::to_string(space.dim()) + ", p=" + std::to_string(p));
  const Hypotheses h = evaluate_hypotheses(space, c, overrides);
  Verdict v;
  v.applies_to = {p, cls, c};
  v.notes.push_back("hypotheses: " + hypothesis_summary(h));
  for (const Rule& r : rules()) {
    const bool fires = r.holds(h, p, cls);
    if (r.note && r.conclusion == PredictedKernel::constant_components && p == 2 && is_symmetric_family(cls))
      v.notes.push_back(r.note);
    if (!fires) continue;
    v.predicted_kernel = r.conclusion;
    v.rule_label = r.label;
    v.rule_fired = r.anchor;
    v.conclusion = r.text;
    if (r.note && r.conclusion != PredictedKernel::constant_components) v.notes.push_back(r.note);
    break;
  }
  if (v.predicted_kernel == PredictedKernel::no_prediction) {
    v.conclusion = "no rule's hypotheses hold";
    v.numerically_checkable = false;
  } else if (!h.compact) {
    v.numerically_checkable = false;
    v.notes.push_back(kAnalyticNote);
  } else {
    v.numerically_checkable = space.discretizable();
  }
  return v;
}

Verdict einstein_stability(const ModelSpace& space) {
  require_einstein(space, "einstein_stability");
  const CurvatureData curv = space.curvature();
  const int n = space.dim();
  const double s = curv.scalar();
  const double k_min = sec_extremes(curv).k_min;
  const double threshold = s / double(n * n);
  Verdict v;
  v.applies_to = {2, SymmetryClass::symmetric_traceless, 1.0};
  v.notes.push_back("K_min = " + fmt(k_min) + ", s/n^2 = " + fmt(threshold) + ", s = " + fmt(s));
  if (std::abs(s) <= kTol) {
    v.conclusion = "hypothesis violated: scalar curvature is zero";
    v.notes.push_back("Ricci-flat case: Δ_L = Δ_E, so a TT-tensor in Ker Δ_L is an infinitesimal Einstein "
                      "deformation (if (M,g) is a Ricci-flat Riemannian manifold)");
    return v;
  }
  const bool inequality = k_min >= threshold - kTol;
  if (!inequality)
    v.notes.push_back("failing inequality: K_min = " + fmt(k_min) + " < s/n^2 = " + fmt(threshold));
  if (!space.compact()) v.notes.push_back("hypothesis violated: the manifold is not closed");
  if (inequality && space.compact()) {
    v.predicted_kernel = PredictedKernel::trivial;
    v.rule_label = "Theorem 4.2";
    v.rule_fired = "is not an unstable manifold and does not admit infinitesimal Einstein deformations";
    v.conclusion = "not unstable; no infinitesimal Einstein deformations";
    v.numerically_checkable = space.discretizable();
  } else {
    v.conclusion = "no prediction";
  }
  return v;
}

Verdict a0_criterion(const ModelSpace& space) {
  require_einstein(space, "a0_criterion");
  const CurvatureData curv = space.curvature();
  const int n = space.dim();
  const double s = curv.scalar();
  const double a0 = a0_estimate(curv);
  const double threshold = std::max(-s / n, s / (2.0 * n));
  Verdict v;
  v.applies_to = {2, SymmetryClass::symmetric_traceless, 1.0};
  v.notes.push_back("a0 = " + fmt(a0) + ", max{-s/n, s/(2n)} = " + fmt(threshold));
  if (a0 < threshold - kTol) {
    v.predicted_kernel = PredictedKernel::trivial;
    v.rule_label = "a0 criterion";
    v.rule_fired = "If a_0 < max{−s/n; s/(2n)}, then g has no infinitesimal Einstein deformations";
    v.conclusion = "no infinitesimal Einstein deformations";
    v.numerically_checkable = space.compact() && space.discretizable();
  } else {
    v.conclusion = "no prediction";
    v.notes.push_back("failing inequality: a0 = " + fmt(a0) + " >= max{-s/n, s/(2n)} = " + fmt(threshold));
  }
  return v;
}

double lichnerowicz_einstein_eigen_link(double s, int n) {
  if (n < 2) fail(ErrorKind::dimension, "lichnerowicz_einstein_eigen_link needs n >= 2");
  return -2.0 * s / n;
}

double einstein_eigen_link_residual(const SpectralReport& kernel, const AssembledOperator& einstein) {
  const double s = einstein.grid->space().curvature().scalar();
  const double lambda = lichnerowicz_einstein_eigen_link(s, einstein.grid->dim());
  double worst = 0.0;
  for (const TensorField& f : kernel.kernel_basis) {
    TensorField r = einstein.apply(f);
    TensorField scaled = f;
    scaled *= lambda;
    r -= scaled;
    worst = std::max(worst, r.norm() / std::max(f.norm(), 1e-300));
  }
  return worst;
}

SoundnessCheck check_soundness(const Verdict& v, const SpectralReport& computed, double tol) {
  SoundnessCheck out;
  switch (v.predicted_kernel) {
    case PredictedKernel::no_prediction:
      out.detail = "no prediction to compare";
      return out;
    case PredictedKernel::trivial:
      out.consistent = computed.kernel_dim == 0;
      out.measure = double(computed.kernel_dim);
      out.detail = "computed kernel_dim = " + std::to_string(computed.kernel_dim) + " (predicted 0)";
      return out;
    case PredictedKernel::parallel_only:
    case PredictedKernel::constant_components: {
      for (const TensorField& f : computed.kernel_basis)
        out.measure = std::max(out.measure, covariant_derivative(f).norm() / std::max(f.norm(), 1e-300));
      out.consistent = out.measure <= tol;
      out.detail = "max ‖DF‖/‖F‖ over " + std::to_string(computed.kernel_dim) + " kernel fields = " +
                   fmt(out.measure) + " (tol " + fmt(tol) + ")";
      return out;
    }
    case PredictedKernel::constant_multiple_of_metric: {
      for (const TensorField& f : computed.kernel_basis) {
        const TensorField g = metric_field(f.grid_ptr());
        const auto fv = f.values();
        const auto gv = g.values();
        const auto w = f.grid().weights();
        const std::size_t fib = f.fiber_size();
        double fg = 0.0, gg = 0.0;
        for (std::size_t node = 0; node < f.node_count(); ++node)
          for (std::size_t i = 0; i < fib; ++i) {
            fg += w[node] * fv[node * fib + i] * gv[node * fib + i];
            gg += w[node] * gv[node * fib + i] * gv[node * fib + i];
          }
        const double mu = fg / gg;
        double dev = 0.0;
        for (std::size_t node = 0; node < f.node_count(); ++node)
          for (std::size_t i = 0; i < fib; ++i) {
            const double d = fv[node * fib + i] - mu * gv[node * fib + i];
            dev += w[node] * d * d;
          }
        out.measure = std::max(out.measure, std::sqrt(dev) / std::max(f.norm(), 1e-300));
      }
      out.consistent = out.measure <= tol;
      out.detail = "max ‖F − μg‖/‖F‖ over " + std::to_string(computed.kernel_dim) + " kernel fields = " +
                   fmt(out.measure) + " (tol " + fmt(tol) + ")";
      return out;
    }
  }
  return out;
}

double soundness_tolerance(const Grid& grid) noexcept { return grid.is_torus() ? 1e-8 : 1e-6; }

}  // namespace lich
