#pragma once

// Ambient 3-manifolds: the homogeneous spaces E(kappa, tau) with 4-dimensional
// isometry group and the warped products eps*dt^2 + a(t)^2 g_o over a
// 2-dimensional space form M_k(c). Both are modelled in a single chart with
// coordinates (x, y, t); the distinguished vertical field is d/dt.
//
// Homogeneous chart:
//   lambda = 1 / (1 + kappa (x^2 + y^2) / 4)
//   G = lambda^2 (dx^2 + dy^2) + (tau lambda (y dx - x dy) + dt)^2
// Warped fiber chart (sigma = -1 for the Lorentzian fiber, k = 1):
//   g_o = (dx^2 + sigma dy^2) / (1 + c (x^2 + sigma y^2) / 4)^2

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "assocfam/errors.hpp"
#include "assocfam/expression.hpp"
#include "assocfam/jet.hpp"
#include "assocfam/linalg.hpp"

namespace assocfam {

/// Christoffel symbols of the second kind, gamma[k][i][j] = Gamma^k_ij.
template <class S>
using Christoffel = std::array<Mat<S, 3>, 3>;

inline double constant_like(double, double c) { return c; }
template <int N>
Jet<N> constant_like(const Jet<N>& x, double c) {
  return Jet<N>(c, x.degree());
}

struct HomogeneousSpace {
  double kappa = 0.0;
  double tau = 0.0;

  /// Validates kappa != 4 tau^2.
  static HomogeneousSpace make(double kappa, double tau);

  bool is_product() const { return tau == 0.0; }
};

/// The warping function a(t), one of a fixed family or a custom expression.
class WarpFunction {
 public:
  enum class Kind { Const, Cosh, Sinh, Sin, Linear, Exp, Custom };

  WarpFunction() = default;
  static WarpFunction make(Kind kind, std::vector<double> params);
  static WarpFunction custom(Expression expr);
  /// Parses `name[params]` or `name` (default parameters).
  static WarpFunction parse(std::string_view text);

  Kind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  std::string str() const;

  template <class S>
  S operator()(const S& t) const {
    const double p0 = params_.empty() ? 0.0 : params_[0];
    const double p1 = params_.size() > 1 ? params_[1] : 0.0;
    switch (kind_) {
      case Kind::Const:
        return constant_like(t, p0);
      case Kind::Cosh:
        return lift(ElementaryFunction::Cosh, t * p0 + p1) * (1.0 / p0);
      case Kind::Sinh:
        return lift(ElementaryFunction::Sinh, t * p0 + p1) * (1.0 / p0);
      case Kind::Sin:
        return lift(ElementaryFunction::Sin, t * p0 + p1) * (1.0 / p0);
      case Kind::Linear:
        return t * p0 + p1;
      case Kind::Exp:
        return lift(ElementaryFunction::Exp, t * p0 + p1);
      case Kind::Custom:
        return expr_(t);
    }
    throw InternalError("unknown warp kind");
  }

  /// a, a', a'', a''' at t.
  std::array<double, 4> derivatives(double t) const;

  friend bool operator==(const WarpFunction& a, const WarpFunction& b) {
    return a.kind_ == b.kind_ && a.params_ == b.params_ && a.expr_ == b.expr_;
  }

 private:
  Kind kind_ = Kind::Const;
  std::vector<double> params_{1.0};
  Expression expr_;
};

struct WarpedProduct {
  int eps = 1;   // sign of dt^2
  int eps0 = 1;  // c = eps0 = +-1, or c = 0 and eps0 = 1
  int c = 0;     // curvature of the fiber
  int k = 0;     // index of the fiber
  WarpFunction a;
  double lo = 0.0;  // open interval I = (lo, hi)
  double hi = 1.0;

  /// Validates the sign constraints and a > 0 on I.
  static WarpedProduct make(int eps, int eps0, int c, int k, WarpFunction a, double lo,
                            double hi);

  /// Coefficient a''/a - (a'/a)^2 + eps c / a^2 appearing in the structure equations.
  double curvature_coefficient(double t) const;
};

/// a''(t) a(t) - a'(t)^2 + eps c. Vanishes identically exactly when the warped
/// product has constant sectional curvature.
double spaceform_residual(const WarpedProduct& w, double t);

/// True when spaceform_residual is below 1e-12 at every sample of I.
bool is_spaceform(const WarpedProduct& w, int samples = 201);

class AmbientSpace {
 public:
  AmbientSpace() : v_(HomogeneousSpace{}) {}
  AmbientSpace(HomogeneousSpace h) : v_(h) {}  // NOLINT(google-explicit-constructor)
  AmbientSpace(WarpedProduct w) : v_(std::move(w)) {}  // NOLINT(google-explicit-constructor)

  /// `E(kappa,tau)` or `W(eps,eps0,c,k,a=<name>[params],I=[lo,hi])`.
  static AmbientSpace parse(std::string_view descriptor);
  std::string descriptor() const;

  bool is_homogeneous() const { return std::holds_alternative<HomogeneousSpace>(v_); }
  bool is_warped() const { return !is_homogeneous(); }
  const HomogeneousSpace& homogeneous() const { return std::get<HomogeneousSpace>(v_); }
  const WarpedProduct& warped() const { return std::get<WarpedProduct>(v_); }

  /// <d_t, d_t>: 1 for homogeneous spaces, eps for warped products.
  int vertical_sign() const { return is_homogeneous() ? 1 : warped().eps; }

  bool in_domain(const Vec3& p) const;
  void require_domain(const Vec3& p) const;

  template <class S>
  Mat<S, 3> metric(const Vec<S, 3>& x) const {
    const S& px = x[0];
    const S& py = x[1];
    const S& pt = x[2];
    Mat<S, 3> g;
    if (is_homogeneous()) {
      const auto& h = homogeneous();
      const S lam = lift(ElementaryFunction::Recip, (px * px + py * py) * (h.kappa / 4.0) + 1.0);
      const S lam2 = lam * lam;
      const Vec<S, 3> w{lam * py * h.tau, -(lam * px * h.tau), constant_like(px, 1.0)};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i][j] = w[i] * w[j];
      g[0][0] = g[0][0] + lam2;
      g[1][1] = g[1][1] + lam2;
      return g;
    }
    const auto& w = warped();
    const double sigma = w.k == 1 ? -1.0 : 1.0;
    const S q = px * px + py * py * sigma;
    const S lam = lift(ElementaryFunction::Recip, q * (w.c / 4.0) + 1.0);
    const S a = w.a(pt);
    const S f = a * a * lam * lam;
    const S zero = constant_like(px, 0.0);
    g = {{{f, zero, zero}, {zero, f * sigma, zero}, {zero, zero, constant_like(px, w.eps)}}};
    return g;
  }

  /// Metric expanded around p as a degree-3 jet in the three chart coordinates.
  Mat<Jet3, 3> metric_jet(const Vec3& p) const;

  Mat3 metric_at(const Vec3& p) const;
  Christoffel<double> christoffels_at(const Vec3& p) const;
  Vec3 vertical_field(const Vec3& p) const;

  /// Levi-Civita connection from a metric jet; the result has degree deg(G) - 1.
  static Christoffel<Jet3> christoffel_jet(const Mat<Jet3, 3>& metric);

  friend bool operator==(const AmbientSpace& a, const AmbientSpace& b);

 private:
  std::variant<HomogeneousSpace, WarpedProduct> v_;
};

bool operator==(const HomogeneousSpace& a, const HomogeneousSpace& b);
bool operator==(const WarpedProduct& a, const WarpedProduct& b);

}  // namespace assocfam
