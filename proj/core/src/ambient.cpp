#include "assocfam/ambient.hpp"

#include <cctype>
#include <cmath>
#include <utility>

namespace assocfam {

namespace {

struct WarpName {
  std::string_view name;
  WarpFunction::Kind kind;
  std::size_t arity;
};

constexpr std::array<WarpName, 7> kWarpNames{{
    {"const", WarpFunction::Kind::Const, 1},
    {"cosh", WarpFunction::Kind::Cosh, 2},
    {"sinh", WarpFunction::Kind::Sinh, 2},
    {"sin", WarpFunction::Kind::Sin, 2},
    {"linear", WarpFunction::Kind::Linear, 2},
    {"exp", WarpFunction::Kind::Exp, 2},
    {"custom", WarpFunction::Kind::Custom, 0},
}};

const WarpName& warp_name(WarpFunction::Kind kind) {
  for (const auto& w : kWarpNames)
    if (w.kind == kind) return w;
  throw InternalError("unknown warp kind");
}

std::vector<double> default_params(WarpFunction::Kind kind) {
  switch (kind) {
    case WarpFunction::Kind::Const:
      return {1.0};
    case WarpFunction::Kind::Custom:
      return {};
    default:
      return {1.0, 0.0};
  }
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

/// Splits on commas that are not nested inside () or [].
std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string_view strip_wrapper(std::string_view s, std::string_view open, char close,
                               std::string_view what) {
  if (s.size() < open.size() + 1 || s.substr(0, open.size()) != open || s.back() != close)
    throw ParseError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
  return s.substr(open.size(), s.size() - open.size() - 1);
}

int parse_int_field(const std::string& s, const char* name) {
  const double x = parse_number(s);
  if (std::floor(x) != x) throw ParseError(std::string(name) + " must be an integer");
  return static_cast<int>(x);
}

Vec<Jet3, 3> chart_variables(const Vec3& p) {
  return {Jet3::variable(0, p[0]), Jet3::variable(1, p[1]), Jet3::variable(2, p[2])};
}

}  // namespace

HomogeneousSpace HomogeneousSpace::make(double kappa, double tau) {
  if (!std::isfinite(kappa) || !std::isfinite(tau))
    throw ParamOutOfRange("kappa and tau must be finite");
  if (kappa == 4.0 * tau * tau)
    throw ParamOutOfRange("kappa = 4 tau^2 is a space form, not an E(kappa,tau) space");
  return HomogeneousSpace{kappa, tau};
}

bool operator==(const HomogeneousSpace& a, const HomogeneousSpace& b) {
  return a.kappa == b.kappa && a.tau == b.tau;
}

WarpFunction WarpFunction::make(Kind kind, std::vector<double> params) {
  if (kind == Kind::Custom) throw ContractViolation("use WarpFunction::custom");
  const auto& name = warp_name(kind);
  if (params.size() != name.arity)
    throw ParseError("warp '" + std::string(name.name) + "' takes " +
                     std::to_string(name.arity) + " parameter(s)");
  for (double p : params)
    if (!std::isfinite(p)) throw ParamOutOfRange("warp parameters must be finite");
  if ((kind == Kind::Cosh || kind == Kind::Sinh || kind == Kind::Sin) && params[0] == 0.0)
    throw ParamOutOfRange("warp rate C1 must be nonzero");
  WarpFunction w;
  w.kind_ = kind;
  w.params_ = std::move(params);
  return w;
}

WarpFunction WarpFunction::custom(Expression expr) {
  if (expr.variables() != std::vector<std::string>{"t"})
    throw ContractViolation("custom warp must be an expression in t");
  WarpFunction w;
  w.kind_ = Kind::Custom;
  w.params_.clear();
  w.expr_ = std::move(expr);
  return w;
}

WarpFunction WarpFunction::parse(std::string_view text) {
  const std::size_t open = text.find('[');
  const std::string_view name = text.substr(0, open);
  const WarpName* entry = nullptr;
  for (const auto& w : kWarpNames)
    if (w.name == name) entry = &w;
  if (entry == nullptr) throw ParseError("unknown warp function '" + std::string(name) + "'");
  if (open == std::string_view::npos) {
    if (entry->kind == Kind::Custom) throw ParseError("custom warp needs an expression");
    return make(entry->kind, default_params(entry->kind));
  }
  if (text.back() != ']') throw ParseError("warp parameters must end with ']'");
  const std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  if (entry->kind == Kind::Custom) return custom(Expression::parse(inner, {"t"}));
  std::vector<double> params;
  for (const auto& part : split_top_level(inner)) params.push_back(parse_number(part));
  return make(entry->kind, std::move(params));
}

std::string WarpFunction::str() const {
  std::string out(warp_name(kind_).name);
  out += '[';
  if (kind_ == Kind::Custom) {
    out += expr_.str();
  } else {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (i > 0) out += ',';
      out += format_shortest(params_[i]);
    }
  }
  out += ']';
  return out;
}

std::array<double, 4> WarpFunction::derivatives(double t) const {
  const Jet1 a = (*this)(Jet1::variable(0, t));
  return {a.partial({0}), a.partial({1}), a.partial({2}), a.partial({3})};
}

WarpedProduct WarpedProduct::make(int eps, int eps0, int c, int k, WarpFunction a, double lo,
                                  double hi) {
  if (eps != 1 && eps != -1) throw ParamOutOfRange("eps must be +1 or -1");
  if (eps0 != 1 && eps0 != -1) throw ParamOutOfRange("eps0 must be +1 or -1");
  if (c < -1 || c > 1) throw ParamOutOfRange("c must be -1, 0 or 1");
  if (k != 0 && k != 1) throw ParamOutOfRange("k must be 0 or 1");
  if (!(c == eps0 || (c == 0 && eps0 == 1)))
    throw ParamOutOfRange("need c = eps0 = +-1, or c = 0 and eps0 = 1");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw ParamOutOfRange("interval I must be finite with lo < hi");
  WarpedProduct w{eps, eps0, c, k, std::move(a), lo, hi};
  constexpr int kSamples = 201;
  for (int i = 0; i < kSamples; ++i) {
    const double t = lo + (hi - lo) * (i + 1) / (kSamples + 1);
    double value = 0.0;
    try {
      value = w.a(t);
    } catch (const DomainError&) {
      value = std::nan("");
    }
    if (!(value > 0.0))
      throw ParamOutOfRange("warp function must be positive on I (fails at t = " +
                            format_shortest(t) + ")");
  }
  return w;
}

double WarpedProduct::curvature_coefficient(double t) const {
  const auto d = a.derivatives(t);
  const double r = d[1] / d[0];
  return d[2] / d[0] - r * r + eps * c / (d[0] * d[0]);
}

bool operator==(const WarpedProduct& a, const WarpedProduct& b) {
  return a.eps == b.eps && a.eps0 == b.eps0 && a.c == b.c && a.k == b.k && a.a == b.a &&
         a.lo == b.lo && a.hi == b.hi;
}

double spaceform_residual(const WarpedProduct& w, double t) {
  const auto d = w.a.derivatives(t);
  return d[2] * d[0] - d[1] * d[1] + w.eps * w.c;
}

bool is_spaceform(const WarpedProduct& w, int samples) {
  for (int i = 0; i < samples; ++i) {
    const double t = w.lo + (w.hi - w.lo) * (i + 1) / (samples + 1);
    if (!(std::fabs(spaceform_residual(w, t)) <= 1e-12)) return false;
  }
  return true;
}

AmbientSpace AmbientSpace::parse(std::string_view descriptor) {
  const std::string s = strip_spaces(descriptor);
  if (!s.empty() && s[0] == 'E') {
    const auto parts = split_top_level(strip_wrapper(s, "E(", ')', "space descriptor"));
    if (parts.size() != 2) throw ParseError("E(kappa,tau) takes two numbers");
    return HomogeneousSpace::make(parse_number(parts[0]), parse_number(parts[1]));
  }
  if (!s.empty() && s[0] == 'W') {
    const auto parts = split_top_level(strip_wrapper(s, "W(", ')', "space descriptor"));
    if (parts.size() != 6)
      throw ParseError("W(eps,eps0,c,k,a=<name>[params],I=[lo,hi]) takes six fields");
    const int eps = parse_int_field(parts[0], "eps");
    const int eps0 = parse_int_field(parts[1], "eps0");
    const int c = parse_int_field(parts[2], "c");
    const int k = parse_int_field(parts[3], "k");
    if (parts[4].rfind("a=", 0) != 0) throw ParseError("fifth field must be a=<warp>");
    WarpFunction a = WarpFunction::parse(std::string_view(parts[4]).substr(2));
    const auto interval =
        split_top_level(strip_wrapper(parts[5], "I=[", ']', "interval"));
    if (interval.size() != 2) throw ParseError("interval must be I=[lo,hi]");
    return WarpedProduct::make(eps, eps0, c, k, std::move(a), parse_number(interval[0]),
                               parse_number(interval[1]));
  }
  throw ParseError("space descriptor must start with E( or W(: '" + std::string(descriptor) +
                   "'");
}

std::string AmbientSpace::descriptor() const {
  if (is_homogeneous()) {
    const auto& h = homogeneous();
    return "E(" + format_shortest(h.kappa) + "," + format_shortest(h.tau) + ")";
  }
  const auto& w = warped();
  return "W(" + std::to_string(w.eps) + "," + std::to_string(w.eps0) + "," +
         std::to_string(w.c) + "," + std::to_string(w.k) + ",a=" + w.a.str() + ",I=[" +
         format_shortest(w.lo) + "," + format_shortest(w.hi) + "])";
}

bool AmbientSpace::in_domain(const Vec3& p) const {
  for (double x : p)
    if (!std::isfinite(x)) return false;
  if (is_homogeneous()) {
    const auto& h = homogeneous();
    return 1.0 + h.kappa * (p[0] * p[0] + p[1] * p[1]) / 4.0 > 0.0;
  }
  const auto& w = warped();
  if (!(p[2] > w.lo && p[2] < w.hi)) return false;
  const double sigma = w.k == 1 ? -1.0 : 1.0;
  if (!(1.0 + w.c * (p[0] * p[0] + sigma * p[1] * p[1]) / 4.0 > 0.0)) return false;
  return true;
}

void AmbientSpace::require_domain(const Vec3& p) const {
  if (!in_domain(p))
    throw DomainError("point (" + format_shortest(p[0]) + ", " + format_shortest(p[1]) + ", " +
                      format_shortest(p[2]) + ") is outside the chart of " + descriptor());
}

Mat<Jet3, 3> AmbientSpace::metric_jet(const Vec3& p) const {
  require_domain(p);
  return metric(chart_variables(p));
}

Mat3 AmbientSpace::metric_at(const Vec3& p) const {
  require_domain(p);
  return metric(p);
}

Christoffel<Jet3> AmbientSpace::christoffel_jet(const Mat<Jet3, 3>& metric) {
  const int d = metric[0][0].degree();
  if (d < 1) throw ContractViolation("Christoffel symbols need a metric jet of degree >= 1");
  std::array<Mat<Jet3, 3>, 3> dg;  // dg[l][i][j] = d_l G_ij
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dg[l][i][j] = metric[i][j].derivative(l);
  Mat<Jet3, 3> low;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) low[i][j] = metric[i][j].truncated(d - 1);
  if (std::fabs(det(Mat3{{{low[0][0].value(), low[0][1].value(), low[0][2].value()},
                          {low[1][0].value(), low[1][1].value(), low[1][2].value()},
                          {low[2][0].value(), low[2][1].value(), low[2][2].value()}}})) == 0.0)
    throw InternalError("degenerate ambient metric");
  const Mat<Jet3, 3> inv = inverse(low);
  Christoffel<Jet3> gamma;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        Jet3 acc(0.0, d - 1);
        for (int l = 0; l < 3; ++l)
          acc += inv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        gamma[k][i][j] = acc * 0.5;
        gamma[k][j][i] = gamma[k][i][j];
      }
    }
  }
  return gamma;
}

Christoffel<double> AmbientSpace::christoffels_at(const Vec3& p) const {
  const auto gamma = christoffel_jet(metric_jet(p));
  Christoffel<double> out;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out[k][i][j] = gamma[k][i][j].value();
  return out;
}

Vec3 AmbientSpace::vertical_field(const Vec3& p) const {
  require_domain(p);
  return {0.0, 0.0, 1.0};
}

bool operator==(const AmbientSpace& a, const AmbientSpace& b) { return a.v_ == b.v_; }

}  // namespace assocfam
