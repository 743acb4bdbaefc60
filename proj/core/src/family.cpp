#include "assocfam/family.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <optional>

#include "assocfam/parallel.hpp"

namespace assocfam {

namespace {

using Complex = std::complex<double>;

constexpr double kUnitScale = 1e-14;
constexpr double kInitialTol = 1e-12;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_args(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

int auto_branch(double f, int branch) {
  if (branch > 0) return 1;
  if (branch < 0) return -1;
  return f < 0.0 ? -1 : 1;
}

/// Coordinates of X in the positive orthonormal frame E1 = d_u/|d_u|, E2 = J E1.
struct ComplexFrame {
  Vec2 e1{};
  Vec2 e2{};
  Mat2 g{};

  explicit ComplexFrame(const SurfaceData& d) : g(d.g) {
    e1 = {1.0 / std::sqrt(d.g[0][0]), 0.0};
    e2 = mul(d.Jmat, e1);
  }
  Complex operator()(const Vec2& x) const { return {g_dot(g, x, e1), g_dot(g, x, e2)}; }
};

Vec2 unit_direction(const Mat2& g, int i) {
  Vec2 x{};
  x[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(g[i][i]);
  return x;
}

Vec2 full_divergence(const SurfaceData& d) {
  return d.deltaAa + mul(d.g_inv, d.dH);
}

/// (lambda + mu J) x.
Vec2 rotate_vector(const Mat2& J, double lambda, double mu, const Vec2& x) {
  const Vec2 jx = mul(J, x);
  return {lambda * x[0] + mu * jx[0], lambda * x[1] + mu * jx[1]};
}

}  // namespace

// ---------------------------------------------------------------- FamilyLaw

FamilyLaw FamilyLaw::canonical() { return FamilyLaw{}; }

FamilyLaw FamilyLaw::custom(Expression F1, Expression F2, Expression lambda, Expression mu) {
  FamilyLaw law;
  law.canonical_ = false;
  law.expr_ = {std::move(F1), std::move(F2), std::move(lambda), std::move(mu)};
  for (const auto& e : law.expr_) {
    if (e.variables().size() > 1 || (e.variables().size() == 1 && e.variables()[0] != "theta"))
      throw ParseError("family law expressions take the single variable theta");
  }
  const Values v0 = law(0.0);
  const std::array<std::pair<const char*, double>, 4> checks{
      {{"F1(0) = 1", v0.F1 - 1.0}, {"F2(0) = 1", v0.F2 - 1.0}, {"lam(0) = 1", v0.lambda - 1.0},
       {"mu(0) = 0", v0.mu}}};
  for (const auto& [what, defect] : checks) {
    if (!(std::fabs(defect) <= kInitialTol))
      throw ParamOutOfRange(std::string("family law violates ") + what);
  }
  return law;
}

FamilyLaw FamilyLaw::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s == "canonical") return canonical();
  const std::string head = "custom(";
  if (s.rfind(head, 0) != 0 || s.back() != ')')
    throw ParseError("family law must be 'canonical' or 'custom(F1=..,F2=..,lam=..,mu=..)'");
  const auto args = split_args(std::string_view(s).substr(head.size(), s.size() - head.size() - 1));
  std::array<std::optional<Expression>, 4> slots;
  for (const auto& arg : args) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos) throw ParseError("family law argument '" + arg + "' lacks '='");
    const std::string key = trim(std::string_view(arg).substr(0, eq));
    const std::string value = trim(std::string_view(arg).substr(eq + 1));
    std::size_t slot = 0;
    if (key == "F1") {
      slot = 0;
    } else if (key == "F2") {
      slot = 1;
    } else if (key == "lam" || key == "lambda") {
      slot = 2;
    } else if (key == "mu") {
      slot = 3;
    } else {
      throw ParseError("unknown family law key '" + key + "'");
    }
    if (slots[slot]) throw ParseError("family law key '" + key + "' given twice");
    slots[slot] = Expression::parse(value, {"theta"});
  }
  for (const auto& e : slots)
    if (!e) throw ParseError("family law needs F1, F2, lam and mu");
  return custom(*slots[0], *slots[1], *slots[2], *slots[3]);
}

std::string FamilyLaw::str() const {
  if (canonical_) return "canonical";
  return "custom(F1=" + expr_[0].str() + ",F2=" + expr_[1].str() + ",lam=" + expr_[2].str() +
         ",mu=" + expr_[3].str() + ")";
}

FamilyLaw::Values FamilyLaw::operator()(double theta) const {
  if (canonical_) return {1.0, 1.0, std::cos(2.0 * theta), -std::sin(2.0 * theta)};
  auto at = [&](const Expression& e) {
    return e.variables().empty() ? e.eval(std::span<const double>{}) : e(theta);
  };
  return {at(expr_[0]), at(expr_[1]), at(expr_[2]), at(expr_[3])};
}

// ----------------------------------------------------------------- rotation

Mat2 rotate_shape(const Mat2& A, double H, const Mat2& Jmat, double theta, const FamilyLaw& law) {
  if (theta == 0.0) return A;
  return rotate_shape<double>(A, H, Jmat, theta, law(theta));
}

Vec2 rotate_structure_field(const Vec2& T, const Mat2& Jmat, double theta, const FamilyLaw& law) {
  if (theta == 0.0) return T;
  return rotate_structure_field<double>(T, Jmat, law(theta));
}

double f_theta_radicand(double f, double s, const FThetaMode& mode) {
  if (!mode.warped) return 1.0 - s * (1.0 - f * f);
  return mode.eps3 * (mode.eps - s * (mode.eps - mode.eps3 * f * f));
}

double solve_f_theta(double f, double theta, const FamilyLaw& law, const FThetaMode& mode,
                     int branch) {
  const FamilyLaw::Values v = law(theta);
  const double s = v.lambda * v.lambda + v.mu * v.mu;
  if (std::fabs(s - 1.0) <= kUnitScale) return f;
  const double r = f_theta_radicand(f, s, mode);
  if (!(r > 0.0))
    throw NoRealSolution("f_theta has no real solution (radicand " + format_shortest(r) + ")");
  return auto_branch(f, branch) * std::sqrt(r);
}

Jet2 solve_f_theta(const Jet2& f, double s, const FThetaMode& mode, int branch) {
  if (std::fabs(s - 1.0) <= kUnitScale) return f;
  const Jet2 f2 = f * f;
  const Jet2 r = mode.warped ? (f2 * (mode.eps3 * mode.eps3 * s) + mode.eps3 * mode.eps * (1.0 - s))
                             : (f2 * s + (1.0 - s));
  if (!(r.value() > 0.0))
    throw NoRealSolution("f_theta has no real solution (radicand " + format_shortest(r.value()) +
                         ")");
  return sqrt(r) * static_cast<double>(auto_branch(f.value(), branch));
}

FThetaMode f_theta_mode(const AmbientSpace& space, int eps3) {
  if (space.is_homogeneous()) return FThetaMode::homogeneous();
  return FThetaMode::warped_product(space.warped().eps, eps3);
}

FieldJets rotate_fields(const SurfaceData& d, double theta, const FamilyLaw& law,
                        const FThetaMode& mode) {
  if (theta == 0.0) return d.fields;
  const FamilyLaw::Values v = law(theta);
  const auto& A = d.fields.A;
  const Jet2 H = (A[0][0] + A[1][1]) * 0.5;
  FieldJets out;
  out.A = rotate_shape(A, H, d.J_jet, theta, v);
  out.T = rotate_structure_field(d.fields.T, d.J_jet, v);
  out.f = solve_f_theta(d.fields.f, v.lambda * v.lambda + v.mu * v.mu, mode);
  return out;
}

SurfaceData family_member(const SurfaceData& d, double theta, const FamilyLaw& law,
                          const AmbientSpace& space) {
  if (theta == 0.0) return d;
  return d.with_fields(rotate_fields(d, theta, law, f_theta_mode(space, d.eps3)));
}

std::vector<double> member_residuals(const SurfaceData& member, const EquationSet& eqs) {
  if (std::holds_alternative<HomogeneousEquations>(eqs)) return evaluate_residuals(member, eqs);
  const auto& w = std::get<WarpedEquations>(eqs).space;
  const auto r = residual_warped(member, w, member.pi);
  return {r[0], r[1], r[2], r[3], closedness_residual(member)};
}

std::vector<ResidualReport> verify_family(const Immersion& imm, const FamilyLaw& law,
                                          const std::vector<double>& thetas, const GridSpec& grid,
                                          double tol) {
  const EquationSet eqs = equations_for(imm.space());
  const auto samples = extract_grid(imm, grid);
  const ResidualReport base = residual_grid(imm, eqs, grid, samples, tol);
  if (!base.pass) {
    throw Error("surface '" + imm.name() + "' does not satisfy its structure equations (max residual " +
                format_shortest(base.max_residual()) + ", " +
                std::to_string(base.failures.size()) + " failed points)");
  }
  const auto names = equation_names(eqs);
  std::vector<Vec2> points(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) points[i] = samples[i].q;

  std::vector<ResidualReport> reports;
  reports.reserve(thetas.size());
  for (const double theta : thetas) {
    ResidualReport r;
    if (theta == 0.0) {
      r = base;
    } else {
      std::vector<PointOutcome> outcomes(samples.size());
      parallel_for(samples.size(), [&](std::size_t i) {
        try {
          const SurfaceData member = family_member(*samples[i].data, theta, law, imm.space());
          outcomes[i].values = member_residuals(member, eqs);
        } catch (const Error& e) {
          outcomes[i].failure = PointFailure{samples[i].q, error_kind(e), e.what()};
        }
      });
      r = aggregate(points, outcomes, names, tol);
      r.surface = base.surface;
      r.space = base.space;
      r.domain = base.domain;
      r.grid = base.grid;
    }
    r.theta = theta;
    r.law = law.str();
    reports.push_back(std::move(r));
  }
  return reports;
}

// ------------------------------------------------------------- obstructions

double obstruction_value(const ObstructionMap& m, const std::string& name) {
  for (const auto& [k, v] : m)
    if (k == name) return v;
  throw ContractViolation("obstruction map has no entry '" + name + "'");
}

std::array<double, 2> relation_h_tau(double H, double tau, const FamilyLaw::Values& v,
                                     double theta) {
  const double c = std::cos(2.0 * theta), s = std::sin(2.0 * theta);
  return {(v.F2 - v.F1 * c) * H + v.F1 * s * tau, v.F1 * s * H + (v.F1 * c - 1.0) * tau};
}

ObstructionMap obstruction_homogeneous(const SurfaceData& d, double kappa, double tau,
                                       const FamilyLaw& law, double theta, double tol_case) {
  if (!(std::fabs(d.f) > tol_case))
    throw CaseViolation("obstruction identities need f != 0 (|f| = " + format_shortest(std::fabs(d.f)) +
                        ")");
  const FamilyLaw::Values v = law(theta);
  const double s = v.lambda * v.lambda + v.mu * v.mu;
  const double cc = kappa - 4.0 * tau * tau;
  const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
  const SurfaceData m = family_member(d, theta, law, AmbientSpace(HomogeneousSpace{kappa, tau}));
  const double f = d.f, ft = m.f;
  const ComplexFrame frame(d);
  const Complex rot(v.lambda, v.mu);
  const Complex e2(c2, -s2);  // e^{-2 J theta}
  const Complex B = f * rot - ft * v.F1 * e2;

  ObstructionMap out;
  out.emplace_back("gauss_new", std::fabs(det(d.A) - det(m.A) - cc * (1.0 - s) * (1.0 - f * f)));

  const Vec2 grad_h = mul(d.g_inv, d.dH);
  const Vec2 grad_ht = mul(m.g_inv, m.dH);
  const Vec2 q = full_divergence(d) - scale(2.0, grad_h);
  const Vec2 qt = full_divergence(m) - scale(2.0, grad_ht);
  out.emplace_back("codazzi_new", std::abs(f * frame(qt) - ft * rot * frame(q)));

  double t_new = 0.0, t3 = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Vec2 x = unit_direction(d.g, i);
    const Vec2 jx = mul(d.Jmat, x);
    const Vec2 lhs = rotate_vector(d.Jmat, v.lambda, v.mu, mul(d.nablaT, x));
    const Vec2 atx = mul(m.A, x);
    const Vec2 rhs{ft * (atx[0] - tau * jx[0]), ft * (atx[1] - tau * jx[1])};
    t_new = std::fmax(t_new, std::abs(frame(lhs - rhs)));
    const Complex zx = frame(x);
    const Complex t3v = B * frame(mul(d.A, x)) - ft * (v.F2 - v.F1 * e2) * d.H * zx -
                        (f * rot - ft) * tau * Complex(0.0, 1.0) * zx;
    t3 = std::fmax(t3, std::abs(t3v));
  }
  out.emplace_back("T_new", t_new);

  const Vec2 at = mul(d.A, d.T);
  const Vec2 jajt = mul(d.Jmat, mul(d.A, mul(d.Jmat, d.T)));
  const Complex V = frame(at + jajt);
  out.emplace_back("V_norm", std::abs(V));
  out.emplace_back("BV_norm", std::abs(B * V));

  const auto rel = relation_h_tau(d.H, tau, v, theta);
  out.emplace_back("relationHandtau_1", rel[0]);
  out.emplace_back("relationHandtau_2", rel[1]);
  out.emplace_back("lambda_dev", std::fabs(v.lambda - (ft / f) * v.F1 * c2));
  out.emplace_back("mu_dev", std::fabs(v.mu + (ft / f) * v.F1 * s2));

  const double kt = d.K - tau * tau;
  const double h2 = d.H * d.H;
  const double f2 = f * f;
  const double g3_common = (1.0 - v.F1 * v.F1) * kt - (v.F2 * v.F2 - v.F1 * v.F1) * h2;
  out.emplace_back("gauss3", std::fabs(g3_common - cc * (1.0 - s + (s - v.F1 * v.F1) * f2)));
  out.emplace_back("gauss3_linear", std::fabs(g3_common - cc * (1.0 - s + (s - v.F1) * f2)));

  const Complex sa = frame(d.deltaAa);
  const Complex nh = frame(grad_h);
  out.emplace_back("codazzi3",
                   std::abs(v.F1 * e2 * sa - v.F2 * nh - rot * (ft / f) * (sa - nh)));
  out.emplace_back("T3", t3);
  return out;
}

ObstructionMap obstruction_warped(const SurfaceData& d, const WarpedProduct& w,
                                  const FamilyLaw& law, double theta, double tol_case) {
  const double k = g_dot(d.g, d.T, d.T);
  if (!(std::fabs(d.f) > tol_case))
    throw CaseViolation("obstruction identities need f != 0 (|f| = " + format_shortest(std::fabs(d.f)) +
                        ")");
  if (!(std::sqrt(std::fabs(k)) > tol_case))
    throw CaseViolation("obstruction identities need T != 0");
  const Vec2 W = mul(d.Jmat, mul(d.A, d.T)) - mul(d.A, mul(d.Jmat, d.T));
  const ComplexFrame frame(d);
  const double w_norm = std::abs(frame(W));
  if (w_norm < 1e-9 * (1.0 + frobenius(d.A)))
    throw UmbilicalPoint("J A T - A J T vanishes; the complex identification is undefined");

  const FamilyLaw::Values v = law(theta);
  const double s = v.lambda * v.lambda + v.mu * v.mu;
  const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
  const SurfaceData m = family_member(d, theta, law, AmbientSpace(w));
  const double f = d.f, ft = m.f;
  const double eps = w.eps, eps3 = d.eps3;
  const auto a = w.a.derivatives(d.pi);
  const double ratio = a[1] / a[0];
  const double curv = w.curvature_coefficient(d.pi);
  const Complex I(0.0, 1.0);
  const Complex rot(v.lambda, v.mu);
  const Complex e2(c2, -s2);
  const Complex B = f * rot - ft * v.F1 * e2;
  const Complex zT = frame(d.T);

  ObstructionMap out;
  const double h2 = d.H * d.H;
  out.emplace_back("gausswp3",
                   std::fabs((1.0 - v.F1 * v.F1) * eps3 * det(d.A) +
                             eps3 * (v.F1 * v.F1 - v.F2 * v.F2) * h2 - curv * (1.0 - s) * k));

  const Vec2 grad_h = mul(d.g_inv, d.dH);
  const Complex sa = frame(d.deltaAa);
  const Complex nh = frame(grad_h);
  out.emplace_back("codazziwp3",
                   std::abs(v.F1 * e2 * sa - v.F2 * nh - rot * (ft / f) * (sa - nh)));

  double twp3 = 0.0;
  const Complex zTt = rot * zT;
  for (int i = 0; i < 2; ++i) {
    const Vec2 x = unit_direction(d.g, i);
    const Complex zx = frame(x);
    const double xt = g_dot(d.g, x, d.T);
    const double xtt = (std::conj(zx) * zTt).real();
    const Complex r = B * frame(mul(d.A, x)) - ft * (v.F2 - v.F1 * e2) * d.H * zx +
                      ratio * (rot * (zx - eps * xt * zT) - (zx - eps * xtt * zTt));
    twp3 = std::fmax(twp3, std::abs(r));
  }
  out.emplace_back("twp3", twp3);
  out.emplace_back("W_norm", w_norm);

  const double D = 2.0 - eps * k;
  out.emplace_back("eqforH1", v.mu * (ratio * D + 2.0 * f * d.H));
  out.emplace_back("eqforH2", 2.0 * (f * v.lambda - ft * v.F2) * d.H -
                                  ratio * ((1.0 - v.lambda) * D + eps * (1.0 - s) * k));
  out.emplace_back("eqF2wp", std::fabs(v.F2 - (f / ft) * (2.0 - eps * s * k) / D));

  const Complex zW = frame(W);
  const Complex alpha_beta = (I * zT) / zW;  // J T = (alpha + beta J) W
  const Complex P = alpha_beta * sa;
  const Complex Q = sa - nh;
  const double b = ratio * f;
  const std::array<Complex, 5> coeff{
      2.0 * f * f * nh / D,
      eps * eps3 * Q + b * eps * k * P - f * f * sa,
      -f * f * eps * k * nh / D,
      -b * eps * k * P,
      -eps3 * k * Q,
  };
  for (std::size_t i = 0; i < coeff.size(); ++i)
    out.emplace_back("c" + std::to_string(i), std::abs(coeff[i]));
  out.emplace_back("d2", std::fabs(b) * std::fabs(k) * std::abs(P));

  const Complex adding = B * zW - ratio * eps * k * rot * (1.0 - rot) * I * zT;
  out.emplace_back("addingTeq", std::abs(adding));
  return out;
}

// ---------------------------------------------------------------- classify

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::TEqualsDt:
      return "T_equals_dt";
    case CaseTag::TZero:
      return "T_zero";
    case CaseTag::Generic:
      return "generic";
    case CaseTag::Mixed:
      return "mixed";
  }
  return "generic";
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::ExistsMinimalProduct:
      return "ExistsMinimalProduct";
    case Outcome::ExistsTotallyUmbilical:
      return "ExistsTotallyUmbilical";
    case Outcome::ExistsVerticalCylinderProduct:
      return "ExistsVerticalCylinderProduct";
    case Outcome::NotExists:
      return "NotExists";
    case Outcome::SpaceFormExcluded:
      return "SpaceFormExcluded";
    case Outcome::Undetermined:
      return "Undetermined";
  }
  return "Undetermined";
}

CaseTag case_of(const SurfaceData& d, double tol_case) {
  if (std::fabs(d.f) <= tol_case) return CaseTag::TEqualsDt;
  if (std::sqrt(std::fabs(g_dot(d.g, d.T, d.T))) <= tol_case) return CaseTag::TZero;
  return CaseTag::Generic;
}

CaseSplit case_split(const std::vector<SurfaceData>& data, double tol_case) {
  CaseSplit split;
  split.tags.reserve(data.size());
  for (const auto& d : data) {
    const CaseTag t = case_of(d, tol_case);
    split.tags.push_back(t);
    if (t == CaseTag::TEqualsDt) ++split.count_t_equals_dt;
    if (t == CaseTag::TZero) ++split.count_t_zero;
    if (t == CaseTag::Generic) ++split.count_generic;
  }
  const int kinds = (split.count_t_equals_dt > 0) + (split.count_t_zero > 0) + (split.count_generic > 0);
  if (kinds > 1) {
    split.aggregate = CaseTag::Mixed;
  } else if (split.count_t_equals_dt > 0) {
    split.aggregate = CaseTag::TEqualsDt;
  } else if (split.count_t_zero > 0) {
    split.aggregate = CaseTag::TZero;
  } else {
    split.aggregate = CaseTag::Generic;
  }
  return split;
}

namespace {

struct RegionStats {
  double max_h = 0.0;
  double max_umbilicity = 0.0;  // |A - H 1|
  double max_a = 0.0;
  double max_ratio = 0.0;  // |a'/a|, warped only
};

RegionStats region_stats(const std::vector<const SurfaceData*>& pts, const AmbientSpace& space) {
  RegionStats r;
  for (const SurfaceData* d : pts) {
    r.max_h = std::fmax(r.max_h, std::fabs(d->H));
    r.max_umbilicity = std::fmax(r.max_umbilicity, frobenius(d->Aa));
    r.max_a = std::fmax(r.max_a, frobenius(d->A));
    if (space.is_warped()) {
      const auto a = space.warped().a.derivatives(d->pi);
      r.max_ratio = std::fmax(r.max_ratio, std::fabs(a[1] / a[0]));
    }
  }
  return r;
}

struct Decision {
  Outcome outcome = Outcome::Undetermined;
  std::string obstruction;
  double magnitude = 0.0;
};

Decision not_exists(std::string name, double magnitude) {
  if (!(magnitude > 0.0)) return {Outcome::Undetermined, std::move(name), magnitude};
  return {Outcome::NotExists, std::move(name), magnitude};
}

double relation_magnitude(const std::vector<const SurfaceData*>& pts, double tau) {
  const FamilyLaw law = FamilyLaw::canonical();
  double m = 0.0;
  for (const SurfaceData* d : pts) {
    for (const double theta : kProbeThetas) {
      const auto r = relation_h_tau(d->H, tau, law(theta), theta);
      m = std::fmax(m, std::fmax(std::fabs(r[0]), std::fabs(r[1])));
    }
  }
  return m;
}

Decision decide_homogeneous(CaseTag tag, const std::vector<const SurfaceData*>& pts,
                            const HomogeneousSpace& h, const Tolerances& tol) {
  const RegionStats st = region_stats(pts, AmbientSpace(h));
  const bool product = h.tau == 0.0;
  const double tc = tol.classification;
  switch (tag) {
    case CaseTag::TEqualsDt:
      if (product && st.max_h <= tc)
        return {Outcome::ExistsVerticalCylinderProduct, "mean_curvature", st.max_h};
      return not_exists("relationHandtau", relation_magnitude(pts, h.tau));
    case CaseTag::TZero:
      if (product && st.max_a <= tc) return {Outcome::ExistsTotallyUmbilical, "shape_operator", st.max_a};
      return not_exists("eqforThomo", std::fmax(st.max_a, std::fabs(h.tau)));
    case CaseTag::Generic:
      if (product && st.max_h <= tc)
        return {Outcome::ExistsMinimalProduct, "mean_curvature", st.max_h};
      if (product && st.max_umbilicity <= tc)
        return {Outcome::ExistsTotallyUmbilical, "umbilicity", st.max_umbilicity};
      return not_exists("relationHandtau", relation_magnitude(pts, h.tau));
    case CaseTag::Mixed:
      break;
  }
  return {};
}

Decision decide_warped(CaseTag tag, const std::vector<const SurfaceData*>& pts,
                       const WarpedProduct& w, const Tolerances& tol) {
  const RegionStats st = region_stats(pts, AmbientSpace(w));
  const double tc = tol.classification;
  const bool static_warp = st.max_ratio <= tc;
  switch (tag) {
    case CaseTag::TEqualsDt:
      if (static_warp && st.max_h <= tc)
        return {Outcome::ExistsVerticalCylinderProduct, "mean_curvature", st.max_h};
      if (!static_warp) return not_exists("Tcondwp", st.max_ratio);
      return not_exists("AthetaTtheta", st.max_h);
    case CaseTag::TZero:
      return {Outcome::ExistsTotallyUmbilical, "umbilicity", st.max_umbilicity};
    case CaseTag::Generic: {
      if (st.max_umbilicity <= tc)
        return {Outcome::ExistsTotallyUmbilical, "umbilicity", st.max_umbilicity};
      if (static_warp && st.max_h <= tc)
        return {Outcome::ExistsMinimalProduct, "mean_curvature", st.max_h};
      const FamilyLaw law = FamilyLaw::canonical();
      double h1 = 0.0, d2 = 0.0;
      for (const SurfaceData* d : pts) {
        const double k = g_dot(d->g, d->T, d->T);
        const auto a = w.a.derivatives(d->pi);
        const double ratio = a[1] / a[0];
        for (const double theta : kProbeThetas) {
          const double mu = law(theta).mu;
          h1 = std::fmax(h1, std::fabs(mu * (ratio * (2.0 - w.eps * k) + 2.0 * d->f * d->H)));
        }
        if (h1 <= tc) {
          try {
            const auto m = obstruction_warped(*d, w, law, kProbeThetas[1], tol.case_split);
            d2 = std::fmax(d2, obstruction_value(m, "d2"));
          } catch (const Error&) {
          }
        }
      }
      if (h1 > tc) return not_exists("eqforH1", h1);
      return not_exists("d2", d2);
    }
    case CaseTag::Mixed:
      break;
  }
  return {};
}

Decision decide(CaseTag tag, const std::vector<const SurfaceData*>& pts, const AmbientSpace& space,
                const Tolerances& tol) {
  if (space.is_homogeneous()) return decide_homogeneous(tag, pts, space.homogeneous(), tol);
  return decide_warped(tag, pts, space.warped(), tol);
}

}  // namespace

Verdict classify(const Immersion& imm, const GridSpec& grid, const Tolerances& tol) {
  Verdict v;
  v.surface = imm.name();
  v.space = imm.space().descriptor();
  const AmbientSpace& space = imm.space();

  if (space.is_warped() && is_spaceform(space.warped())) {
    const WarpedProduct& w = space.warped();
    double worst = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double t = w.lo + (w.hi - w.lo) * i / 201.0;
      worst = std::fmax(worst, std::fabs(spaceform_residual(w, t)));
    }
    v.outcome = Outcome::SpaceFormExcluded;
    v.obstruction = "spaceform_residual";
    v.magnitude = worst;
    return v;
  }

  const EquationSet eqs = equations_for(space);
  const auto samples = extract_grid(imm, grid);
  const ResidualReport base = residual_grid(imm, eqs, grid, samples, tol.residual);
  v.diagnostics.emplace_back("max_residual", base.max_residual());
  v.diagnostics.emplace_back("failed_points", static_cast<double>(base.failures.size()));
  if (!base.pass) {
    v.outcome = Outcome::Undetermined;
    v.obstruction = "structure_equations";
    v.magnitude = base.max_residual();
    return v;
  }

  std::vector<SurfaceData> data;
  data.reserve(samples.size());
  for (const auto& s : samples) data.push_back(*s.data);
  const CaseSplit split = case_split(data, tol.case_split);
  v.case_tag = split.aggregate;

  std::vector<const SurfaceData*> all;
  for (const auto& d : data) all.push_back(&d);
  const RegionStats st = region_stats(all, space);
  v.diagnostics.emplace_back("max_H", st.max_h);
  v.diagnostics.emplace_back("max_umbilicity", st.max_umbilicity);
  v.diagnostics.emplace_back("max_A", st.max_a);
  if (space.is_homogeneous()) {
    v.diagnostics.emplace_back("tau", space.homogeneous().tau);
  } else {
    v.diagnostics.emplace_back("max_warp_ratio", st.max_ratio);
  }
  v.diagnostics.emplace_back("points_T_equals_dt", static_cast<double>(split.count_t_equals_dt));
  v.diagnostics.emplace_back("points_T_zero", static_cast<double>(split.count_t_zero));
  v.diagnostics.emplace_back("points_generic", static_cast<double>(split.count_generic));

  if (split.aggregate != CaseTag::Mixed) {
    const Decision d = decide(split.aggregate, all, space, tol);
    v.outcome = d.outcome;
    v.obstruction = d.obstruction;
    v.magnitude = d.magnitude;
    return v;
  }

  for (const CaseTag tag : {CaseTag::TEqualsDt, CaseTag::TZero, CaseTag::Generic}) {
    std::vector<const SurfaceData*> region;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (split.tags[i] == tag) region.push_back(&data[i]);
    if (region.empty()) continue;
    const Decision d = decide(tag, region, space, tol);
    v.regions.push_back({tag, region.size(), d.outcome, d.obstruction, d.magnitude});
  }
  v.outcome = Outcome::Undetermined;
  v.obstruction = "mixed_cases";
  v.magnitude = 0.0;
  return v;
}

}  // namespace assocfam
