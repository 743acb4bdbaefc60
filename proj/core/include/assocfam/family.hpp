#pragma once

// Generalized associate families with rotating structure field:
//
//   A_theta = F1 e^{-2 J theta} (A - H 1) + F2 H 1,   e^{-2 J theta} = cos 2theta 1 - sin 2theta J
//   T_theta = lambda T + mu J T
//   f_theta from |T_theta|^2 + f_theta^2 = 1            (homogeneous)
//             |T_theta|^2 + eps3 f_theta^2 = eps        (warped)
//
// verify_family checks the rotated data against the structure equations;
// the obstruction maps evaluate the derived identities as diagnostics, and
// classify decides existence from the case hypotheses only.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "assocfam/compat.hpp"
#include "assocfam/expression.hpp"
#include "assocfam/surface.hpp"

namespace assocfam {

class FamilyLaw {
 public:
  struct Values {
    double F1 = 1.0;
    double F2 = 1.0;
    double lambda = 1.0;
    double mu = 0.0;
  };

  /// F1 = F2 = 1, lambda = cos 2theta, mu = -sin 2theta.
  static FamilyLaw canonical();
  /// Expressions in `theta`; checks F1(0) = F2(0) = lambda(0) = 1, mu(0) = 0.
  static FamilyLaw custom(Expression F1, Expression F2, Expression lambda, Expression mu);
  /// `canonical` or `custom(F1=<expr>,F2=<expr>,lam=<expr>,mu=<expr>)`.
  static FamilyLaw parse(std::string_view text);

  std::string str() const;
  bool is_canonical() const { return canonical_; }
  Values operator()(double theta) const;

 private:
  bool canonical_ = true;
  std::array<Expression, 4> expr_;
};

template <class S>
Mat<S, 2> rotation_2theta(const Mat<S, 2>& J, double theta, const S& one) {
  const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
  return {{{one * c - J[0][0] * s, -(J[0][1] * s)}, {-(J[1][0] * s), one * c - J[1][1] * s}}};
}

/// F1 e^{-2 J theta}(A - H 1) + F2 H 1 over doubles or jets.
template <class S>
Mat<S, 2> rotate_shape(const Mat<S, 2>& A, const S& H, const Mat<S, 2>& J, double theta,
                       const FamilyLaw::Values& v) {
  const S one = H * 0.0 + 1.0;
  const Mat<S, 2> Aa{{{A[0][0] - H, A[0][1]}, {A[1][0], A[1][1] - H}}};
  Mat<S, 2> out = scale(v.F1, mul(rotation_2theta(J, theta, one), Aa));
  out[0][0] = out[0][0] + H * v.F2;
  out[1][1] = out[1][1] + H * v.F2;
  return out;
}

Mat2 rotate_shape(const Mat2& A, double H, const Mat2& Jmat, double theta, const FamilyLaw& law);

template <class S>
Vec<S, 2> rotate_structure_field(const Vec<S, 2>& T, const Mat<S, 2>& J,
                                 const FamilyLaw::Values& v) {
  const Vec<S, 2> jt = mul(J, T);
  return {T[0] * v.lambda + jt[0] * v.mu, T[1] * v.lambda + jt[1] * v.mu};
}

Vec2 rotate_structure_field(const Vec2& T, const Mat2& Jmat, double theta, const FamilyLaw& law);

/// Which norm constraint ties f_theta to T_theta.
struct FThetaMode {
  bool warped = false;
  int eps = 1;
  int eps3 = 1;

  static FThetaMode homogeneous() { return {}; }
  static FThetaMode warped_product(int eps, int eps3) { return {true, eps, eps3}; }
};

/// Radicand whose square root is |f_theta|, given s = lambda^2 + mu^2.
double f_theta_radicand(double f, double s, const FThetaMode& mode);

/// f_theta = branch * sqrt(radicand); branch 0 takes the sign of f (+1 at f = 0).
/// Throws NoRealSolution when the radicand is not positive.
double solve_f_theta(double f, double theta, const FamilyLaw& law, const FThetaMode& mode,
                     int branch = 0);
Jet2 solve_f_theta(const Jet2& f, double s, const FThetaMode& mode, int branch = 0);

FThetaMode f_theta_mode(const AmbientSpace& space, int eps3);

/// Rotated (A, T, f) jets at one point.
FieldJets rotate_fields(const SurfaceData& d, double theta, const FamilyLaw& law,
                        const FThetaMode& mode);

/// The family member's data at theta: rotated fields, same intrinsic geometry.
SurfaceData family_member(const SurfaceData& d, double theta, const FamilyLaw& law,
                          const AmbientSpace& space);

/// Residuals of a family member. For warped spaces the fifth entry is the
/// closedness of T_theta (the member's height function is not known).
std::vector<double> member_residuals(const SurfaceData& member, const EquationSet& eqs);

/// One report per theta. theta = 0 returns the base report unchanged.
/// Throws Error when the base surface fails its own structure equations.
std::vector<ResidualReport> verify_family(const Immersion& imm, const FamilyLaw& law,
                                          const std::vector<double>& thetas, const GridSpec& grid,
                                          double tol);

using ObstructionMap = std::vector<std::pair<std::string, double>>;

double obstruction_value(const ObstructionMap& m, const std::string& name);

/// The two scalars (F2 - F1 cos 2theta) H + F1 sin 2theta tau and
/// F1 sin 2theta H + (F1 cos 2theta - 1) tau.
std::array<double, 2> relation_h_tau(double H, double tau, const FamilyLaw::Values& v,
                                     double theta);

/// Requires |f| > tol_case (CaseViolation otherwise).
ObstructionMap obstruction_homogeneous(const SurfaceData& d, double kappa, double tau,
                                       const FamilyLaw& law, double theta,
                                       double tol_case = 1e-6);

/// Requires |f|, |T| > tol_case (CaseViolation) and a non-umbilical point (UmbilicalPoint).
ObstructionMap obstruction_warped(const SurfaceData& d, const WarpedProduct& w,
                                  const FamilyLaw& law, double theta, double tol_case = 1e-6);

enum class CaseTag { TEqualsDt, TZero, Generic, Mixed };
std::string to_string(CaseTag tag);

struct CaseSplit {
  std::vector<CaseTag> tags;  // per sample
  CaseTag aggregate = CaseTag::Generic;
  std::size_t count_t_equals_dt = 0;
  std::size_t count_t_zero = 0;
  std::size_t count_generic = 0;
};

CaseTag case_of(const SurfaceData& d, double tol_case);
CaseSplit case_split(const std::vector<SurfaceData>& data, double tol_case);

enum class Outcome {
  ExistsMinimalProduct,
  ExistsTotallyUmbilical,
  ExistsVerticalCylinderProduct,
  NotExists,
  SpaceFormExcluded,
  Undetermined,
};
std::string to_string(Outcome outcome);

struct Tolerances {
  double residual = 1e-8;
  double case_split = 1e-6;
  double classification = 1e-7;
};

struct SubVerdict {
  CaseTag case_tag = CaseTag::Generic;
  std::size_t points = 0;
  Outcome outcome = Outcome::Undetermined;
  std::string obstruction;
  double magnitude = 0.0;
};

struct Verdict {
  Outcome outcome = Outcome::Undetermined;
  std::string obstruction;
  double magnitude = 0.0;
  CaseTag case_tag = CaseTag::Generic;
  std::string surface;
  std::string space;
  ObstructionMap diagnostics;
  std::vector<SubVerdict> regions;  // only for mixed surfaces
};

/// Probe angles used for the obstruction magnitudes.
inline constexpr std::array<double, 3> kProbeThetas{0.39269908169872414, 0.78539816339744828,
                                                   1.1780972450961724};

Verdict classify(const Immersion& imm, const GridSpec& grid, const Tolerances& tol = {});

}  // namespace assocfam
