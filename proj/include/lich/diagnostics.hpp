#pragma once

// Pointwise identities and inequalities evaluated on discretized fields:
// the Bochner–Weitzenböck formula, the Kato inequality, the TT-tensor test
// and commutation of Δ_L with the metric trace.

#include <cstdint>
#include <vector>

#include "lich/fields.hpp"

namespace lich {

// ½Δ_B‖F‖² + g(Δ_L F, F) − ‖∇F‖² − c·g(ℜ_p F, F) at every node, with
// Δ_B = −(scalar rough Laplacian) and Δ_L = Δ̄ + cℜ_p on the full tensor bundle.
TensorField bochner_residual(const TensorField& f, double c);

// min over nodes with ‖F‖ ≥ 1e−10 of ‖∇F‖² − ‖d‖F‖‖², where
// d‖F‖ = ⟨∇F, F⟩/‖F‖. Identically zero field → degenerate error.
double kato_gap(const TensorField& f);

struct TTDiagnostics {
  bool is_tt = false;
  double divergence_norm = 0.0;  // ‖D*F‖ in the quadrature norm
  double trace_norm = 0.0;       // ‖trace_g F‖ in the quadrature norm
  double tol = 0.0;
};

// p = 2 and class symmetric or symmetric_traceless, otherwise shape error.
TTDiagnostics tt_check(const TensorField& f, double tol);

// max over `samples` random symmetric 2-tensor fields φ of
// ‖trace_g(Δ_L φ) − Δ̄(trace_g φ)‖ (Δ_L with c = 1).
double trace_commutation_residual(const ModelSpace& space, std::vector<int> resolution,
                                  std::uint64_t seed = 0, int samples = 4);
double trace_commutation_residual(const GridPtr& grid, std::uint64_t seed = 0, int samples = 4);

}  // namespace lich
