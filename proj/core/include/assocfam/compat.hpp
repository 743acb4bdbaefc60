#pragma once

// Structure equations as pointwise residuals, and their aggregation over grids.
//
// Homogeneous E(kappa, tau):
//   gauss    |K - det A - tau^2 - (kappa - 4 tau^2)(1 - |T|^2)|
//   codazzi  |(grad_u A) d_v - (grad_v A) d_u - (kappa - 4 tau^2) f (<d_v,T> d_u - <d_u,T> d_v)|_g / sqrt(det g)
//   T        max over unit d_u, d_v of |grad_X T - f (A X - tau J X)|_g
//   f        max over unit d_u, d_v of |X(f) + <A X, T> - tau <J X, T>|
// Warped eps dt^2 + a^2 g_o, with C = a''/a - a'^2/a^2 + eps c / a^2:
//   gauss    |K - eps3 det A + eps a'^2/a^2 - c/a^2 + C |T|^2|
//   codazzi  as above with right-hand side eps3 C f (<Y,T> X - <X,T> Y)
//   T        grad_X T - f A X - (a'/a)(X - eps <X,T> T)
//   f        X(f) + eps3 <A X, T> + eps (a'/a) f <X, T>
//   gradient |T - eps g^-1 dpi|_g

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "assocfam/ambient.hpp"
#include "assocfam/surface.hpp"

namespace assocfam {

struct HomogeneousEquations {
  double kappa = 0.0;
  double tau = 0.0;
};

struct WarpedEquations {
  WarpedProduct space;
};

using EquationSet = std::variant<HomogeneousEquations, WarpedEquations>;

EquationSet equations_for(const AmbientSpace& space);

/// Equation names in report order.
std::vector<std::string> equation_names(const EquationSet& eqs);

/// (gauss, codazzi, T, f).
std::array<double, 4> residual_homogeneous(const SurfaceData& d, double kappa, double tau);

/// (gauss, codazzi, T, f) with a, a', a'' evaluated at pi.
std::array<double, 4> residual_warped(const SurfaceData& d, const WarpedProduct& w, double pi);

/// |T - eps grad(pi)|_g.
double gradient_residual(const SurfaceData& d, const WarpedProduct& w);

/// |d(T^flat)(e1, e2)|: T is a gradient field only if this vanishes.
double closedness_residual(const SurfaceData& d);

/// All residuals of `eqs` at one point, in equation_names order.
std::vector<double> evaluate_residuals(const SurfaceData& d, const EquationSet& eqs);

struct EquationStats {
  std::string name;
  double max_abs = 0.0;
  double mean_abs = 0.0;
  Vec2 argmax{};
};

struct PointFailure {
  Vec2 q{};
  std::string error;  // exception kind
  std::string message;
};

struct ResidualReport {
  std::string surface;
  std::string space;
  ChartDomain domain;
  GridSpec grid;
  double tol = 1e-8;
  std::optional<double> theta;
  std::string law;
  std::vector<EquationStats> equations;
  std::vector<PointFailure> failures;
  bool pass = false;

  double max_residual() const;
  const EquationStats& equation(const std::string& name) const;
};

/// Outcome at one grid point: residual values, or the failure that prevented them.
struct PointOutcome {
  std::vector<double> values;
  std::optional<PointFailure> failure;
};

/// Deterministic reduction in grid order; means use compensated summation.
ResidualReport aggregate(const std::vector<Vec2>& points, const std::vector<PointOutcome>& outcomes,
                         const std::vector<std::string>& names, double tol);

/// Per-point extraction results over a grid.
struct GridSample {
  Vec2 q{};
  std::optional<SurfaceData> data;
  std::optional<PointFailure> failure;
};
std::vector<GridSample> extract_grid(const Immersion& imm, const GridSpec& grid);

/// Exception kind name used in reports.
std::string error_kind(const std::exception& e);

ResidualReport residual_grid(const Immersion& imm, const EquationSet& eqs, const GridSpec& grid,
                             double tol);
ResidualReport residual_grid(const Immersion& imm, const GridSpec& grid, double tol);

/// Same as residual_grid, reusing an extracted grid.
ResidualReport residual_grid(const Immersion& imm, const EquationSet& eqs, const GridSpec& grid,
                             const std::vector<GridSample>& samples, double tol);

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace assocfam
