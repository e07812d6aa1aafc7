#pragma once

// Vanishing and rigidity rules for the kernel of Δ_L, evaluated from the
// curvature of a catalog space, plus the Einstein-stability criteria.
//
// Rules are keyed by a quote anchor (a verbatim phrase of the statement they
// encode) together with a human-readable label. They are tried strongest
// conclusion first, and within equal strength the symmetric-tensor rules come
// before the general-tensor rules; the first rule whose hypotheses all hold
// fires. Every hypothesis enters a rule positively, so switching a flag such
// as simply_connected or holonomy_irreducible on can only let more rules fire
// and never weakens the verdict.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lich/model_space.hpp"
#include "lich/spectrum.hpp"
#include "lich/tensor.hpp"

namespace lich {

// Sign of a pointwise curvature quantity over all of M. `positive_somewhere`
// means bounded below by some k > 0 at a point (for the homogeneous catalog
// spaces: everywhere); `zero` is both nonnegative and nonpositive.
enum class SignClass { zero, nonnegative, positive_somewhere, nonpositive, negative_somewhere, indefinite };

std::string_view to_string(SignClass s) noexcept;
SignClass classify_sign(double min, double max, double tol = 1e-10) noexcept;
bool sign_nonnegative(SignClass s) noexcept;
bool sign_nonpositive(SignClass s) noexcept;

struct Hypotheses {
  int n = 0;
  double c = 0.0;
  SignClass curvature_operator_sign = SignClass::zero;  // eigenvalues of R̄
  double lambda_min = 0.0, lambda_max = 0.0;
  SignClass sec_sign = SignClass::zero;
  double k_min = 0.0, k_max = 0.0;
  SignClass ricci_sign = SignClass::zero;
  double ricci_min = 0.0, ricci_max = 0.0;
  double scalar = 0.0;
  double a0 = 0.0;
  bool compact = false;
  bool complete = true;
  bool simply_connected = false;
  bool volume_infinite = false;
  bool einstein = false;
  bool holonomy_irreducible = false;
};

// User-supplied metadata that replaces the values derived from the catalog.
struct HypothesisOverrides {
  std::optional<bool> compact, complete, simply_connected, volume_infinite, einstein, holonomy_irreducible;
  std::optional<SignClass> curvature_operator_sign, sec_sign, ricci_sign;
};

Hypotheses evaluate_hypotheses(const ModelSpace& space, double c, const HypothesisOverrides& overrides = {});

enum class PredictedKernel { trivial, parallel_only, constant_multiple_of_metric, constant_components, no_prediction };

std::string_view to_string(PredictedKernel k) noexcept;
// trivial 3 > constant_multiple_of_metric 2 > parallel_only = constant_components 1 > no_prediction 0.
int strength(PredictedKernel k) noexcept;

struct AppliesTo {
  int p = 0;
  SymmetryClass cls = SymmetryClass::general;
  double c = 0.0;
};

struct Verdict {
  PredictedKernel predicted_kernel = PredictedKernel::no_prediction;
  std::string rule_label;  // e.g. "Corollary 2.3"; empty for no_prediction
  std::string rule_fired;  // quote anchor; empty for no_prediction
  std::string conclusion;  // plain-language conclusion
  AppliesTo applies_to;
  bool numerically_checkable = false;  // false for noncompact (analytic-only) predictions
  std::vector<std::string> notes;
};

// Evaluates the rule list for Δ_L = Δ̄ + cℜ_p on the given class. p ≥ 1
// (order error otherwise); class must be valid for (n, p) (shape error).
Verdict classify_kernel(const ModelSpace& space, int p, SymmetryClass cls, double c,
                        const HypothesisOverrides& overrides = {});

// Closed Einstein manifold with s ≠ 0 and K_min ≥ s/n² → not unstable and no
// infinitesimal Einstein deformations. Non-Einstein → capability error.
Verdict einstein_stability(const ModelSpace& space);

// a₀ < max{−s/n, s/(2n)} (strict) → no infinitesimal Einstein deformations.
Verdict a0_criterion(const ModelSpace& space);

// −2s/n: the Δ_E-eigenvalue of every element of Ker Δ_L on an Einstein space.
double lichnerowicz_einstein_eigen_link(double s, int n);

// max over kernel fields F of ‖Δ_E F − λ F‖ / ‖F‖, λ = −2s/n.
double einstein_eigen_link_residual(const SpectralReport& lichnerowicz_kernel, const AssembledOperator& einstein);

// Compares a verdict against a computed kernel: trivial ⇒ kernel_dim = 0;
// parallel_only / constant_components ⇒ ‖DF‖ ≤ tol·‖F‖ for every kernel
// field; constant_multiple_of_metric ⇒ ‖F − (⟨F,g⟩/⟨g,g⟩)g‖ ≤ tol·‖F‖.
struct SoundnessCheck {
  bool consistent = true;
  double measure = 0.0;  // largest relative deviation found (0 when not applicable)
  std::string detail;
};
SoundnessCheck check_soundness(const Verdict& v, const SpectralReport& computed, double tol);

// Grid tolerance for the soundness comparison: 1e−8 on tori, 1e−6 on the sphere.
double soundness_tolerance(const Grid& grid) noexcept;

}  // namespace lich
