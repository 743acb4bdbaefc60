#include "assocfam/compat.hpp"

#include <cmath>
#include <typeinfo>

#include "assocfam/parallel.hpp"

namespace assocfam {

namespace {

Vec2 unit_direction(const Mat2& g, int i) {
  Vec2 x{};
  x[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(g[i][i]);
  return x;
}

/// |(grad_u A) d_v - (grad_v A) d_u - coef (<d_v,T> d_u - <d_u,T> d_v)|_g / sqrt(det g).
double codazzi_defect(const SurfaceData& d, double coef) {
  const Vec2 gT = mul(d.g, d.T);  // (<d_u,T>, <d_v,T>)
  Vec2 r{};
  for (int j = 0; j < 2; ++j) r[j] = d.nablaA[0][j][1] - d.nablaA[1][j][0];
  r[0] -= coef * gT[1];
  r[1] += coef * gT[0];
  return g_norm(d.g, r) / std::sqrt(det(d.g));
}

}  // namespace

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

EquationSet equations_for(const AmbientSpace& space) {
  if (space.is_homogeneous())
    return HomogeneousEquations{space.homogeneous().kappa, space.homogeneous().tau};
  return WarpedEquations{space.warped()};
}

std::vector<std::string> equation_names(const EquationSet& eqs) {
  if (std::holds_alternative<HomogeneousEquations>(eqs)) return {"gauss", "codazzi", "T", "f"};
  return {"gauss", "codazzi", "T", "f", "gradient"};
}

std::array<double, 4> residual_homogeneous(const SurfaceData& d, double kappa, double tau) {
  const double c = kappa - 4.0 * tau * tau;
  const double t2 = g_dot(d.g, d.T, d.T);
  const double r_gauss = std::fabs(d.K - det(d.A) - tau * tau - c * (1.0 - t2));
  const double r_codazzi = codazzi_defect(d, c * d.f);
  double r_t = 0.0, r_f = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Vec2 x = unit_direction(d.g, i);
    const Vec2 ax = mul(d.A, x);
    const Vec2 jx = mul(d.Jmat, x);
    const Vec2 grad_t = mul(d.nablaT, x);
    const Vec2 rt{grad_t[0] - d.f * (ax[0] - tau * jx[0]), grad_t[1] - d.f * (ax[1] - tau * jx[1])};
    r_t = std::fmax(r_t, g_norm(d.g, rt));
    const double xf = d.df[0] * x[0] + d.df[1] * x[1];
    r_f = std::fmax(r_f, std::fabs(xf + g_dot(d.g, ax, d.T) - tau * g_dot(d.g, jx, d.T)));
  }
  return {r_gauss, r_codazzi, r_t, r_f};
}

std::array<double, 4> residual_warped(const SurfaceData& d, const WarpedProduct& w, double pi) {
  const auto a = w.a.derivatives(pi);
  const double ratio = a[1] / a[0];
  const double curv = w.curvature_coefficient(pi);
  const double eps = w.eps;
  const double eps3 = d.eps3;
  const double t2 = g_dot(d.g, d.T, d.T);
  const double r_gauss = std::fabs(d.K - eps3 * det(d.A) + eps * ratio * ratio -
                                   w.c / (a[0] * a[0]) + curv * t2);
  const double r_codazzi = codazzi_defect(d, eps3 * curv * d.f);
  double r_t = 0.0, r_f = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Vec2 x = unit_direction(d.g, i);
    const Vec2 ax = mul(d.A, x);
    const double xt = g_dot(d.g, x, d.T);
    const Vec2 grad_t = mul(d.nablaT, x);
    Vec2 rt{};
    for (int j = 0; j < 2; ++j)
      rt[j] = grad_t[j] - d.f * ax[j] - ratio * (x[j] - eps * xt * d.T[j]);
    r_t = std::fmax(r_t, g_norm(d.g, rt));
    const double xf = d.df[0] * x[0] + d.df[1] * x[1];
    r_f = std::fmax(r_f, std::fabs(xf + eps3 * g_dot(d.g, ax, d.T) + eps * ratio * d.f * xt));
  }
  return {r_gauss, r_codazzi, r_t, r_f};
}

double gradient_residual(const SurfaceData& d, const WarpedProduct& w) {
  const Vec2 grad = mul(d.g_inv, d.dpi);
  const Vec2 r{d.T[0] - w.eps * grad[0], d.T[1] - w.eps * grad[1]};
  return g_norm(d.g, r);
}

double closedness_residual(const SurfaceData& d) {
  const Vec<Jet2, 2> eta = mul(d.g_jet, d.fields.T);
  const double curl = eta[1].partial({1, 0}) - eta[0].partial({0, 1});
  return std::fabs(curl) / std::sqrt(det(d.g));
}

std::vector<double> evaluate_residuals(const SurfaceData& d, const EquationSet& eqs) {
  if (const auto* h = std::get_if<HomogeneousEquations>(&eqs)) {
    const auto r = residual_homogeneous(d, h->kappa, h->tau);
    return {r[0], r[1], r[2], r[3]};
  }
  const auto& w = std::get<WarpedEquations>(eqs).space;
  const auto r = residual_warped(d, w, d.pi);
  return {r[0], r[1], r[2], r[3], gradient_residual(d, w)};
}

double ResidualReport::max_residual() const {
  double m = 0.0;
  for (const auto& e : equations) m = std::fmax(m, e.max_abs);
  return m;
}

const EquationStats& ResidualReport::equation(const std::string& name) const {
  for (const auto& e : equations)
    if (e.name == name) return e;
  throw ContractViolation("report has no equation named '" + name + "'");
}

ResidualReport aggregate(const std::vector<Vec2>& points, const std::vector<PointOutcome>& outcomes,
                         const std::vector<std::string>& names, double tol) {
  if (points.size() != outcomes.size())
    throw ContractViolation("one outcome per grid point is required");
  ResidualReport report;
  report.tol = tol;
  std::vector<CompensatedSum> sums(names.size());
  std::vector<bool> seen(names.size(), false);
  std::size_t counted = 0;
  for (const auto& n : names) report.equations.push_back({n, 0.0, 0.0, {}});
  bool finite = true;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const PointOutcome& o = outcomes[p];
    if (o.failure) {
      report.failures.push_back(*o.failure);
      continue;
    }
    if (o.values.size() != names.size())
      throw ContractViolation("residual count does not match equation names");
    ++counted;
    for (std::size_t e = 0; e < names.size(); ++e) {
      const double v = std::fabs(o.values[e]);
      if (!std::isfinite(v)) {
        finite = false;
        report.failures.push_back({points[p], "NonFinite", names[e] + " residual is not finite"});
        continue;
      }
      sums[e].add(v);
      EquationStats& s = report.equations[e];
      if (!seen[e] || v > s.max_abs) {
        s.max_abs = v;
        s.argmax = points[p];
        seen[e] = true;
      }
    }
  }
  for (std::size_t e = 0; e < names.size(); ++e)
    report.equations[e].mean_abs = counted == 0 ? 0.0 : sums[e].value() / static_cast<double>(counted);
  report.pass = finite && report.failures.empty() && counted > 0;
  for (const auto& s : report.equations) report.pass = report.pass && s.max_abs <= tol;
  return report;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const DegenerateImmersion*>(&e)) return "DegenerateImmersion";
  if (dynamic_cast<const SignatureError*>(&e)) return "SignatureError";
  if (dynamic_cast<const LightlikeNormal*>(&e)) return "LightlikeNormal";
  if (dynamic_cast<const NoRealSolution*>(&e)) return "NoRealSolution";
  if (dynamic_cast<const CaseViolation*>(&e)) return "CaseViolation";
  if (dynamic_cast<const UmbilicalPoint*>(&e)) return "UmbilicalPoint";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const UnknownEntry*>(&e)) return "UnknownEntry";
  if (dynamic_cast<const ParamOutOfRange*>(&e)) return "ParamOutOfRange";
  if (dynamic_cast<const InternalError*>(&e)) return "InternalError";
  if (dynamic_cast<const ContractViolation*>(&e)) return "ContractViolation";
  return "Error";
}

std::vector<GridSample> extract_grid(const Immersion& imm, const GridSpec& grid) {
  const auto points = grid.points(imm.domain());
  std::vector<GridSample> samples(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    GridSample& s = samples[i];
    s.q = points[i];
    try {
      s.data = extract(imm, points[i]);
    } catch (const Error& e) {
      s.failure = PointFailure{points[i], error_kind(e), e.what()};
    }
  });
  return samples;
}

ResidualReport residual_grid(const Immersion& imm, const EquationSet& eqs, const GridSpec& grid,
                             const std::vector<GridSample>& samples, double tol) {
  std::vector<Vec2> points(samples.size());
  std::vector<PointOutcome> outcomes(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    points[i] = samples[i].q;
    if (samples[i].failure) {
      outcomes[i].failure = samples[i].failure;
    } else {
      outcomes[i].values = evaluate_residuals(*samples[i].data, eqs);
    }
  }
  ResidualReport report = aggregate(points, outcomes, equation_names(eqs), tol);
  report.surface = imm.name();
  report.space = imm.space().descriptor();
  report.domain = imm.domain();
  report.grid = grid;
  return report;
}

ResidualReport residual_grid(const Immersion& imm, const EquationSet& eqs, const GridSpec& grid,
                             double tol) {
  return residual_grid(imm, eqs, grid, extract_grid(imm, grid), tol);
}

ResidualReport residual_grid(const Immersion& imm, const GridSpec& grid, double tol) {
  return residual_grid(imm, equations_for(imm.space()), grid, tol);
}

}  // namespace assocfam
