#pragma once

// Catalog of model spaces: space forms, flat tori, the round 2-sphere and
// products of these. Catalog strings:
//   sphere:n=N[,k=K|,r=R]        round S^N of curvature K > 0 (default 1)
//   hyperbolic:n=N[,k=K]         H^N of curvature K < 0 (default −1)
//   euclidean:n=N                flat R^N
//   torus:n=N[,L=a,b,…]          flat torus with periods (default 1)
//   product:F+F+…                factors sphereN, hyperbolicN, euclideanN,
//                                torusN, line, circle; optional "(k)" suffix
//                                sets the curvature, e.g. sphere2(0.5)

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lich/curvature.hpp"

namespace lich {

enum class FactorKind { sphere, hyperbolic, euclidean, torus };

struct Factor {
  FactorKind kind;
  int dim;
  double kappa;                 // constant sectional curvature (0 for flat kinds)
  std::vector<double> periods;  // torus only
};

enum class SpaceKind { space_form, product, flat_torus, round_sphere_2 };

const char* to_string(SpaceKind kind) noexcept;

class ModelSpace {
 public:
  static ModelSpace parse(std::string_view spec);
  static ModelSpace space_form(int n, double kappa);
  static ModelSpace flat_torus(std::vector<double> periods);
  static ModelSpace round_sphere_2(double radius);
  static ModelSpace product(std::vector<Factor> factors);

  SpaceKind kind() const noexcept;
  int dim() const noexcept;
  std::span<const Factor> factors() const noexcept { return factors_; }

  bool compact() const noexcept;
  bool complete() const noexcept { return true; }
  bool simply_connected() const noexcept;
  bool volume_infinite() const noexcept { return !compact(); }
  bool holonomy_irreducible() const noexcept;
  bool einstein() const noexcept;
  // Ricci = κ_E g when Einstein.
  std::optional<double> einstein_constant() const noexcept;

  // Fields can be discretized: flat tori of dimension ≤ 3 and the round S².
  bool discretizable() const noexcept;
  double sphere_radius() const;                   // round_sphere_2 only
  std::span<const double> torus_periods() const;  // flat_torus only

  CurvatureData curvature() const;
  std::string spec_string() const;  // canonical catalog string

 private:
  std::vector<Factor> factors_;
};

}  // namespace lich
