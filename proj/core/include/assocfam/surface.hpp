#pragma once

// Extrinsic and intrinsic data of a parametrized surface chi: U -> ambient chart.
//
// Every quantity is read off Taylor jets of chi at the sample point, so first,
// second and third derivatives are exact. The structure fields (A, T, f) are
// kept as degree-1 jets in (u, v); their covariant derivatives follow from the
// jet partials plus the intrinsic Christoffel symbols of g.
//
// Conventions (coordinate frame d_u, d_v; matrices act on column vectors):
//   nu  = s G^-1 (chi_u x chi_v) / sqrt|<.,.>|, s = orientation sign
//   A   = -(grad_X nu)^tan, so <A X, Y> = <grad_X Y, nu>
//   J   = s / sqrt(det g) [[-g12, -g22], [g11, g12]]
//   d_t = dchi(T) + f nu

#include <functional>
#include <string>
#include <vector>

#include "assocfam/ambient.hpp"
#include "assocfam/jet.hpp"
#include "assocfam/linalg.hpp"

namespace assocfam {

using SurfaceMap = std::function<Vec<Jet2, 3>(const Jet2& u, const Jet2& v)>;

struct ChartDomain {
  double u_min = 0.0;
  double u_max = 1.0;
  double v_min = 0.0;
  double v_max = 1.0;

  friend bool operator==(const ChartDomain&, const ChartDomain&) = default;
};

/// Uniform nu x nv sample grid, shrunk by `margin` (fraction of each side).
struct GridSpec {
  int nu = 21;
  int nv = 21;
  double margin = 0.05;

  /// Points in row-major order: u varies fastest.
  std::vector<Vec2> points(const ChartDomain& domain) const;
  std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class Orientation { Positive, Negative, Auto };

class Immersion {
 public:
  /// Auto picks the normal with f >= 0 at the first point of the default grid
  /// (when |f| > 1e-9 there), and the positive orientation otherwise.
  Immersion(AmbientSpace space, ChartDomain domain, SurfaceMap map,
            Orientation orientation = Orientation::Auto, std::string name = {});

  const AmbientSpace& space() const { return space_; }
  const ChartDomain& domain() const { return domain_; }
  const std::string& name() const { return name_; }
  /// Resolved orientation sign, +1 or -1.
  int orientation() const { return sign_; }

  /// chi as degree-3 jets in (u, v) at q.
  Vec<Jet2, 3> evaluate(const Vec2& q) const;

  Immersion flipped() const;

  /// Same surface in new chart coordinates: chi o phi over `domain`.
  Immersion reparametrized(std::function<std::array<Jet2, 2>(const Jet2&, const Jet2&)> phi,
                           ChartDomain domain) const;

 private:
  Immersion(AmbientSpace space, ChartDomain domain, SurfaceMap map, int sign, std::string name);

  AmbientSpace space_;
  ChartDomain domain_;
  SurfaceMap map_;
  int sign_ = 1;
  std::string name_;
};

/// The structure fields as degree-1 jets at a point.
struct FieldJets {
  Mat<Jet2, 2> A;
  Vec<Jet2, 2> T;
  Jet2 f;
};

struct ShapeSplit {
  double H = 0.0;
  Mat2 Ac{};
  Mat2 Aa{};
};

struct SurfaceData {
  Vec2 q{};
  Vec3 p{};
  Mat2 g{};
  Mat2 g_inv{};
  Mat2 Jmat{};
  Vec3 nu{};
  int eps3 = 1;
  Mat2 A{};
  Vec2 T{};
  double f = 0.0;
  double H = 0.0;
  double K = 0.0;
  Mat2 Aa{};
  std::array<Mat2, 2> nablaA{};  // nablaA[i] = grad_{d_i} A
  Mat2 nablaT{};                 // column i = grad_{d_i} T
  Vec2 df{};
  Vec2 dH{};
  Vec2 deltaAa{};
  double pi = 0.0;  // t-coordinate of chi
  Vec2 dpi{};

  std::array<Mat2, 2> gamma{};  // intrinsic Christoffels, gamma[k][i][j]
  Mat<Jet2, 2> g_jet;           // degree 1
  Mat<Jet2, 2> J_jet;           // degree 1
  FieldJets fields;

  /// Copy with (A, T, f) replaced and every derived quantity recomputed.
  SurfaceData with_fields(FieldJets fields) const;
};

Mat2 first_fundamental(const Immersion& imm, const Vec2& q);

struct NormalData {
  Vec3 nu{};
  int eps3 = 1;
};
NormalData normal_and_sign(const Immersion& imm, const Vec2& q);

Mat2 shape_operator(const Immersion& imm, const Vec2& q);

struct StructureProjection {
  Vec2 T{};
  double f = 0.0;
};
StructureProjection structure_projection(const Immersion& imm, const Vec2& q);

double gauss_curvature(const Immersion& imm, const Vec2& q);

/// H = tr(A)/2, A^c = H 1, A^a = A - H 1. Jmat is accepted for symmetry with
/// the other operations; the split itself does not depend on it.
ShapeSplit split_shape(const Mat2& A, const Mat2& Jmat);

struct CovariantData {
  std::array<Mat2, 2> nablaA{};
  Mat2 nablaT{};
  Vec2 df{};
  Vec2 dH{};
  Vec2 deltaAa{};
};
CovariantData covariant_data(const Immersion& imm, const Vec2& q);

/// Full extraction at one chart point.
SurfaceData extract(const Immersion& imm, const Vec2& q);

/// Covariant derivative along d_i of a (1,1)-tensor / vector field given as jets.
Mat2 covariant_derivative(const Mat<Jet2, 2>& op, const std::array<Mat2, 2>& gamma, int i);
Vec2 covariant_derivative(const Vec<Jet2, 2>& x, const std::array<Mat2, 2>& gamma, int i);

/// Divergence tr(grad A) as a tangent vector.
Vec2 divergence(const SurfaceData& d, const std::array<Mat2, 2>& nabla);

/// (grad_{e1} A) e2 - (grad_{e2} A) e1 for a positive orthonormal frame (e1, e2 = J e1).
Vec2 exterior_derivative(const SurfaceData& d, const std::array<Mat2, 2>& nabla);

inline double values_of(const Jet2& j) { return j.value(); }
Mat2 values_of(const Mat<Jet2, 2>& m);
Vec2 values_of(const Vec<Jet2, 2>& v);

}  // namespace assocfam
