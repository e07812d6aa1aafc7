#include <string>

#include "doctest.h"
#include "lich/checker.hpp"
#include "lich/error.hpp"

using lich::ModelSpace;
using lich::PredictedKernel;
using lich::SignClass;
using lich::SymmetryClass;

namespace {

bool has_note(const lich::Verdict& v, const std::string& fragment) {
  for (const auto& n : v.notes)
    if (n.find(fragment) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("sign classification") {
  CHECK(lich::classify_sign(0.0, 0.0) == SignClass::zero);
  CHECK(lich::classify_sign(0.0, 1.0) == SignClass::nonnegative);
  CHECK(lich::classify_sign(0.5, 1.0) == SignClass::positive_somewhere);
  CHECK(lich::classify_sign(-1.0, 0.0) == SignClass::nonpositive);
  CHECK(lich::classify_sign(-1.0, -0.5) == SignClass::negative_somewhere);
  CHECK(lich::classify_sign(-1.0, 1.0) == SignClass::indefinite);
  CHECK(lich::sign_nonnegative(SignClass::zero));
  CHECK(lich::sign_nonpositive(SignClass::zero));
  CHECK_FALSE(lich::sign_nonnegative(SignClass::indefinite));
}

TEST_CASE("kernel verdicts on catalog spaces") {
  const lich::Verdict flat = lich::classify_kernel(ModelSpace::parse("torus:n=2"), 2, SymmetryClass::symmetric, 1.0);
  CHECK(flat.predicted_kernel == PredictedKernel::parallel_only);
  CHECK(flat.rule_label == "Corollary 2.3");
  CHECK(flat.rule_fired.find("invariant under parallel translation") != std::string::npos);
  CHECK(flat.numerically_checkable);

  const lich::Verdict round = lich::classify_kernel(ModelSpace::parse("sphere:n=2"), 2, SymmetryClass::symmetric, 1.0);
  CHECK(round.predicted_kernel == PredictedKernel::constant_multiple_of_metric);
  CHECK(round.rule_label == "Theorem 3.1");
  CHECK(round.rule_fired.find("a constant multiple of g") != std::string::npos);

  const lich::Verdict hyp =
      lich::classify_kernel(ModelSpace::parse("hyperbolic:n=3"), 2, SymmetryClass::symmetric_traceless, -1.0);
  CHECK(hyp.predicted_kernel == PredictedKernel::trivial);
  CHECK(hyp.rule_label == "Corollary 3.2");
  CHECK(hyp.rule_fired.find("then L^q(Ker Δ_L) is trivial") != std::string::npos);
  CHECK_FALSE(hyp.numerically_checkable);
  CHECK(has_note(hyp, "analytic prediction — not numerically checked"));

  const lich::Verdict one = lich::classify_kernel(ModelSpace::parse("sphere:n=3"), 1, SymmetryClass::general, 1.0);
  CHECK(one.predicted_kernel == PredictedKernel::trivial);
  CHECK(one.rule_label == "Remark 1");

  const lich::Verdict forms = lich::classify_kernel(ModelSpace::parse("sphere:n=4"), 2, SymmetryClass::alternating, 1.0);
  CHECK(forms.predicted_kernel == PredictedKernel::trivial);
  CHECK(forms.rule_label == "Corollary 2.3");

  const lich::Verdict none = lich::classify_kernel(ModelSpace::parse("sphere:n=2"), 2, SymmetryClass::symmetric, -1.0);
  CHECK(none.predicted_kernel == PredictedKernel::no_prediction);
  CHECK(none.rule_fired.empty());
  CHECK(none.applies_to.c == -1.0);

  const lich::Verdict sampson = lich::classify_kernel(ModelSpace::parse("torus:n=2"), 2, SymmetryClass::symmetric, -1.0);
  CHECK(has_note(sampson, "c-sign +1"));
}

TEST_CASE("kernel verdict argument checks") {
  const ModelSpace s2 = ModelSpace::parse("sphere:n=2");
  CHECK_THROWS_AS(lich::classify_kernel(s2, 0, SymmetryClass::general, 1.0), lich::Error);
  CHECK_THROWS_AS(lich::classify_kernel(s2, 3, SymmetryClass::alternating, 1.0), lich::Error);
}

TEST_CASE("adding holonomy or topology hypotheses never weakens a verdict") {
  const char* spaces[] = {"sphere:n=2", "sphere:n=3", "torus:n=2", "torus:n=3", "hyperbolic:n=3",
                          "euclidean:n=3", "product:sphere2+sphere2", "product:sphere2+line",
                          "product:hyperbolic2+hyperbolic2", "product:sphere2+hyperbolic2"};
  const SymmetryClass classes[] = {SymmetryClass::general, SymmetryClass::symmetric, SymmetryClass::alternating,
                                   SymmetryClass::symmetric_traceless};
  for (const char* spec : spaces) {
    const ModelSpace m = ModelSpace::parse(spec);
    for (int p = 1; p <= 3; ++p)
      for (SymmetryClass cls : classes) {
        if (!lich::class_valid(m.dim(), p, cls)) continue;
        for (double c : {-1.0, 1.0}) {
          const int base = lich::strength(lich::classify_kernel(m, p, cls, c).predicted_kernel);
          lich::HypothesisOverrides more;
          more.simply_connected = true;
          more.holonomy_irreducible = true;
          CAPTURE(spec);
          CAPTURE(p);
          CHECK(lich::strength(lich::classify_kernel(m, p, cls, c, more).predicted_kernel) >= base);
          lich::HypothesisOverrides vol;
          vol.volume_infinite = true;
          CHECK(lich::strength(lich::classify_kernel(m, p, cls, c, vol).predicted_kernel) >= base);
        }
      }
  }
}

TEST_CASE("Einstein stability") {
  for (int n = 2; n <= 5; ++n) {
    const ModelSpace sn = ModelSpace::space_form(n, 1.0);
    const lich::Verdict v = lich::einstein_stability(sn);
    CHECK(v.predicted_kernel == PredictedKernel::trivial);
    CHECK(v.rule_label == "Theorem 4.2");
    CHECK(v.rule_fired.find("is not an unstable manifold") != std::string::npos);
    CHECK(v.conclusion.find("not unstable") != std::string::npos);
    const lich::Verdict a = lich::a0_criterion(sn);
    CHECK(a.predicted_kernel == PredictedKernel::trivial);
  }
  for (int n = 2; n <= 4; ++n) {
    const lich::Verdict h = lich::einstein_stability(ModelSpace::space_form(n, -1.0));
    CHECK(h.predicted_kernel == PredictedKernel::no_prediction);
    CHECK(has_note(h, "failing inequality: K_min = -1"));
    const lich::Verdict a = lich::a0_criterion(ModelSpace::space_form(n, -1.0));
    CHECK((a.predicted_kernel == PredictedKernel::trivial) == (n >= 3));
  }
  const lich::Verdict pp = lich::einstein_stability(ModelSpace::parse("product:sphere2+sphere2"));
  CHECK(pp.predicted_kernel == PredictedKernel::no_prediction);
  CHECK(has_note(pp, "failing inequality: K_min = 0 < s/n^2 = 0.25"));

  const lich::Verdict flat = lich::a0_criterion(ModelSpace::parse("torus:n=2"));
  CHECK(flat.predicted_kernel == PredictedKernel::no_prediction);
  CHECK(lich::einstein_stability(ModelSpace::parse("torus:n=3")).predicted_kernel == PredictedKernel::no_prediction);

  try {
    lich::einstein_stability(ModelSpace::parse("product:sphere2+line"));
    FAIL("expected a capability error");
  } catch (const lich::Error& e) {
    CHECK(e.kind() == lich::ErrorKind::capability);
  }
}

TEST_CASE("verdicts agree with computed kernels") {
  struct Case {
    const char* space;
    std::vector<int> res;
    int p;
    SymmetryClass cls;
    double c;
  };
  const Case cases[] = {
      {"torus:n=2", {16}, 2, SymmetryClass::symmetric, 1.0},
      {"torus:n=2", {16}, 2, SymmetryClass::general, -1.0},
      {"sphere:n=2", {16, 32}, 2, SymmetryClass::symmetric, 1.0},
      {"sphere:n=2", {16, 32}, 2, SymmetryClass::symmetric_traceless, 1.0},
      {"sphere:n=2", {16, 32}, 1, SymmetryClass::general, 1.0},
  };
  for (const Case& c : cases) {
    CAPTURE(c.space);
    const ModelSpace m = ModelSpace::parse(c.space);
    const lich::Verdict v = lich::classify_kernel(m, c.p, c.cls, c.c);
    CHECK(v.predicted_kernel != PredictedKernel::no_prediction);
    const auto grid = lich::Grid::make(m, c.res);
    const auto op = lich::assemble(grid, c.p, c.cls, lich::OperatorKind::lichnerowicz, c.c);
    const lich::SpectralReport r = lich::spectrum(op, 8);
    const lich::SoundnessCheck s = lich::check_soundness(v, r, lich::soundness_tolerance(*grid));
    CHECK(s.consistent);
  }
  // A wrong prediction is caught.
  lich::Verdict wrong;
  wrong.predicted_kernel = PredictedKernel::trivial;
  const auto op = lich::assemble(lich::Grid::make(ModelSpace::parse("torus:n=2"), {8}), 1, SymmetryClass::general,
                                 lich::OperatorKind::lichnerowicz, 1.0);
  CHECK_FALSE(lich::check_soundness(wrong, lich::spectrum(op, 4), 1e-8).consistent);
}
