#include "assocfam/surface.hpp"

#include <cmath>
#include <utility>

namespace assocfam {

namespace {

constexpr std::array<int, 2> kDu{1, 0};
constexpr std::array<int, 2> kDv{0, 1};

std::array<int, 2> unit(int i) { return i == 0 ? kDu : kDv; }

template <std::size_t R, std::size_t C>
Mat<Jet2, R, C> truncate(const Mat<Jet2, R, C>& m, int degree) {
  Mat<Jet2, R, C> out;
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < C; ++j) out[i][j] = m[i][j].truncated(degree);
  return out;
}

template <std::size_t N>
Vec<Jet2, N> truncate(const Vec<Jet2, N>& v, int degree) {
  Vec<Jet2, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = v[i].truncated(degree);
  return out;
}

template <std::size_t N>
Vec<Jet2, N> derivative(const Vec<Jet2, N>& v, int var) {
  Vec<Jet2, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = v[i].derivative(var);
  return out;
}

Vec<Jet2, 3> cross(const Vec<Jet2, 3>& a, const Vec<Jet2, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Everything the extraction computes before the structure fields are split off.
struct Extrinsic {
  Vec3 p{};
  Mat<Jet2, 2> g;  // degree 2
  Mat<Jet2, 2> J;  // degree 1
  Vec3 nu{};
  int eps3 = 1;
  FieldJets fields;  // degree 1
  Jet2 pi;           // degree 3
};

Extrinsic extrinsic(const Immersion& imm, const Vec2& q) {
  const Vec<Jet2, 3> chi = imm.evaluate(q);
  Extrinsic ex;
  ex.p = {chi[0].value(), chi[1].value(), chi[2].value()};
  const AmbientSpace& space = imm.space();
  space.require_domain(ex.p);

  const Mat<Jet3, 3> G3 = space.metric_jet(ex.p);
  const Christoffel<Jet3> Gamma3 = AmbientSpace::christoffel_jet(G3);
  const std::array<Jet2, 3> disp{chi[0].displacement(), chi[1].displacement(),
                                 chi[2].displacement()};
  Mat<Jet2, 3> G;  // degree 3 along the surface
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G[i][j] = compose(G3[i][j], disp);
  Christoffel<Jet2> Gamma;  // degree 2
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) Gamma[k][i][j] = compose(Gamma3[k][i][j], disp);

  const std::array<Vec<Jet2, 3>, 2> d1{derivative(chi, 0), derivative(chi, 1)};  // degree 2
  const Mat<Jet2, 3> G2 = truncate(G, 2);

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ex.g[i][j] = form(G2, d1[i], d1[j]);

  // Tangent plane checks.
  const Vec<Jet2, 3> n = cross(d1[0], d1[1]);
  const double n_norm =
      std::sqrt(n[0].value() * n[0].value() + n[1].value() * n[1].value() +
                n[2].value() * n[2].value());
  double scale = 0.0;
  for (const auto& x : d1)
    for (const auto& c : x) scale = std::fmax(scale, std::fabs(c.value()));
  if (!(n_norm > 1e-12 * std::fmax(1.0, scale * scale)))
    throw DegenerateImmersion("dchi has rank < 2 at (" + format_shortest(q[0]) + ", " +
                              format_shortest(q[1]) + ")");
  const Mat2 g0 = values_of(ex.g);
  if (!(g0[0][0] > 0.0 && det(g0) > 0.0))
    throw SignatureError("induced metric is not positive definite at (" + format_shortest(q[0]) +
                         ", " + format_shortest(q[1]) + ")");

  // Unit normal.
  const Mat<Jet2, 3> G2_inv = inverse(G2);
  const Vec<Jet2, 3> nu_hat = mul(G2_inv, n);
  const Jet2 nn = dot(n, nu_hat);
  double inv_scale = 0.0;
  for (const auto& row : G2_inv)
    for (const auto& c : row) inv_scale = std::fmax(inv_scale, std::fabs(c.value()));
  if (!(std::fabs(nn.value()) > 1e-12 * n_norm * n_norm * inv_scale))
    throw LightlikeNormal("normal direction is lightlike at (" + format_shortest(q[0]) + ", " +
                          format_shortest(q[1]) + ")");
  ex.eps3 = nn.value() > 0.0 ? 1 : -1;
  const int s = imm.orientation();
  const Jet2 inv_len = lift(ElementaryFunction::Pow, nn * static_cast<double>(ex.eps3), -0.5);
  Vec<Jet2, 3> nu;  // degree 2
  for (int a = 0; a < 3; ++a) nu[a] = nu_hat[a] * inv_len * static_cast<double>(s);
  ex.nu = {nu[0].value(), nu[1].value(), nu[2].value()};

  // Second fundamental form h_ik = <nu, chi_ik + Gamma(chi_i, chi_k)> at degree 1.
  const Mat<Jet2, 3> G1 = truncate(G, 1);
  const Vec<Jet2, 3> nu1 = truncate(nu, 1);
  const std::array<Vec<Jet2, 3>, 2> t1{truncate(d1[0], 1), truncate(d1[1], 1)};
  Mat<Jet2, 2> h;
  for (int i = 0; i < 2; ++i) {
    for (int k = i; k < 2; ++k) {
      const Vec<Jet2, 3> second = derivative(d1[i], k);
      Vec<Jet2, 3> z;
      for (int a = 0; a < 3; ++a) {
        Jet2 acc = second[a];
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) acc += Gamma[a][b][c].truncated(1) * t1[i][b] * t1[k][c];
        z[a] = acc;
      }
      h[i][k] = form(G1, nu1, z);
      h[k][i] = h[i][k];
    }
  }
  const Mat<Jet2, 2> g1 = truncate(ex.g, 1);
  const Mat<Jet2, 2> g1_inv = inverse(g1);
  ex.fields.A = mul(g1_inv, h);

  // d_t = dchi(T) + f nu.
  Vec<Jet2, 2> w;
  for (int k = 0; k < 2; ++k) {
    Jet2 acc(0.0, 1);
    for (int b = 0; b < 3; ++b) acc += G1[2][b] * t1[k][b];
    w[k] = acc;
  }
  ex.fields.T = mul(g1_inv, w);
  Jet2 ft(0.0, 1);
  for (int b = 0; b < 3; ++b) ft += G1[2][b] * nu1[b];
  ex.fields.f = ft * static_cast<double>(ex.eps3);

  const Jet2 root = lift(ElementaryFunction::Pow, det(g1), -0.5) * static_cast<double>(s);
  ex.J = {{{-(g1[0][1] * root), -(g1[1][1] * root)}, {g1[0][0] * root, g1[0][1] * root}}};
  ex.pi = chi[2];
  return ex;
}

/// Gauss curvature from g and its first and second derivatives.
double brioschi(const Mat<Jet2, 2>& g) {
  const Jet2& Ej = g[0][0];
  const Jet2& Fj = g[0][1];
  const Jet2& Gj = g[1][1];
  const double E = Ej.value(), F = Fj.value(), G = Gj.value();
  const double Eu = Ej.partial({1, 0}), Ev = Ej.partial({0, 1}), Evv = Ej.partial({0, 2});
  const double Fu = Fj.partial({1, 0}), Fv = Fj.partial({0, 1}), Fuv = Fj.partial({1, 1});
  const double Gu = Gj.partial({1, 0}), Gv = Gj.partial({0, 1}), Guu = Gj.partial({2, 0});
  const Mat3 m1{{{-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev},
                 {Fv - 0.5 * Gu, E, F},
                 {0.5 * Gv, F, G}}};
  const Mat3 m2{{{0.0, 0.5 * Ev, 0.5 * Gu}, {0.5 * Ev, E, F}, {0.5 * Gu, F, G}}};
  const double w = E * G - F * F;
  return (det(m1) - det(m2)) / (w * w);
}

std::array<Mat2, 2> intrinsic_christoffels(const Mat<Jet2, 2>& g, const Mat2& g_inv) {
  // dg[l][i][j] = d_l g_ij
  std::array<Mat2, 2> dg{};
  for (int l = 0; l < 2; ++l)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) dg[l][i][j] = g[i][j].partial(unit(l));
  std::array<Mat2, 2> gamma{};
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double acc = 0.0;
        for (int l = 0; l < 2; ++l)
          acc += g_inv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        gamma[k][i][j] = 0.5 * acc;
      }
  return gamma;
}

}  // namespace

Mat2 values_of(const Mat<Jet2, 2>& m) {
  return {{{m[0][0].value(), m[0][1].value()}, {m[1][0].value(), m[1][1].value()}}};
}

Vec2 values_of(const Vec<Jet2, 2>& v) { return {v[0].value(), v[1].value()}; }

std::vector<Vec2> GridSpec::points(const ChartDomain& domain) const {
  if (nu < 1 || nv < 1) throw ContractViolation("grid needs at least one point per side");
  if (!(margin >= 0.0 && margin < 0.5)) throw ContractViolation("grid margin must be in [0, 0.5)");
  auto axis = [&](double lo, double hi, int n) {
    const double pad = margin * (hi - lo);
    const double a = lo + pad, b = hi - pad;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      xs[static_cast<std::size_t>(i)] = n == 1 ? 0.5 * (a + b) : a + (b - a) * i / (n - 1);
    return xs;
  };
  const auto us = axis(domain.u_min, domain.u_max, nu);
  const auto vs = axis(domain.v_min, domain.v_max, nv);
  std::vector<Vec2> out;
  out.reserve(size());
  for (double v : vs)
    for (double u : us) out.push_back({u, v});
  return out;
}

Immersion::Immersion(AmbientSpace space, ChartDomain domain, SurfaceMap map, int sign,
                     std::string name)
    : space_(std::move(space)),
      domain_(domain),
      map_(std::move(map)),
      sign_(sign),
      name_(std::move(name)) {}

Immersion::Immersion(AmbientSpace space, ChartDomain domain, SurfaceMap map,
                     Orientation orientation, std::string name)
    : Immersion(std::move(space), domain, std::move(map),
                orientation == Orientation::Negative ? -1 : 1, std::move(name)) {
  if (!(domain_.u_min < domain_.u_max && domain_.v_min < domain_.v_max))
    throw ContractViolation("chart domain must be a nonempty rectangle");
  if (!map_) throw ContractViolation("immersion needs a parametrization");
  if (orientation == Orientation::Auto) {
    const Vec2 first = GridSpec{}.points(domain_).front();
    try {
      const double f = extrinsic(*this, first).fields.f.value();
      if (std::fabs(f) > 1e-9 && f < 0.0) sign_ = -1;
    } catch (const Error&) {
      // Keep the positive orientation; the failure resurfaces at extraction.
    }
  }
}

Vec<Jet2, 3> Immersion::evaluate(const Vec2& q) const {
  const Jet2 u = Jet2::variable(0, q[0]);
  const Jet2 v = Jet2::variable(1, q[1]);
  Vec<Jet2, 3> chi = map_(u, v);
  for (const auto& c : chi)
    if (c.degree() != Jet2::kMaxDegree)
      throw ContractViolation("parametrization must return degree-3 jets");
  return chi;
}

Immersion Immersion::flipped() const { return Immersion(space_, domain_, map_, -sign_, name_); }

Immersion Immersion::reparametrized(
    std::function<std::array<Jet2, 2>(const Jet2&, const Jet2&)> phi, ChartDomain domain) const {
  SurfaceMap inner = map_;
  SurfaceMap composed = [inner, phi = std::move(phi)](const Jet2& u, const Jet2& v) {
    const auto uv = phi(u, v);
    return inner(uv[0], uv[1]);
  };
  return Immersion(space_, domain, std::move(composed), sign_, name_);
}

Mat2 covariant_derivative(const Mat<Jet2, 2>& op, const std::array<Mat2, 2>& gamma, int i) {
  Mat2 out{};
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      double acc = op[j][k].partial(unit(i));
      for (int l = 0; l < 2; ++l)
        acc += gamma[j][i][l] * op[l][k].value() - op[j][l].value() * gamma[l][i][k];
      out[j][k] = acc;
    }
  return out;
}

Vec2 covariant_derivative(const Vec<Jet2, 2>& x, const std::array<Mat2, 2>& gamma, int i) {
  Vec2 out{};
  for (int j = 0; j < 2; ++j) {
    double acc = x[j].partial(unit(i));
    for (int l = 0; l < 2; ++l) acc += gamma[j][i][l] * x[l].value();
    out[j] = acc;
  }
  return out;
}

Vec2 divergence(const SurfaceData& d, const std::array<Mat2, 2>& nabla) {
  Vec2 out{};
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) out[j] += d.g_inv[i][k] * nabla[i][j][k];
  return out;
}

Vec2 exterior_derivative(const SurfaceData& d, const std::array<Mat2, 2>& nabla) {
  const double s = d.Jmat[1][0] > 0.0 ? 1.0 : -1.0;
  const double root = std::sqrt(det(d.g));
  return {s * (nabla[0][0][1] - nabla[1][0][0]) / root, s * (nabla[0][1][1] - nabla[1][1][0]) / root};
}

SurfaceData SurfaceData::with_fields(FieldJets f_jets) const {
  SurfaceData d = *this;
  d.fields = std::move(f_jets);
  d.A = values_of(d.fields.A);
  d.T = values_of(d.fields.T);
  d.f = d.fields.f.value();
  const ShapeSplit split = split_shape(d.A, d.Jmat);
  d.H = split.H;
  d.Aa = split.Aa;
  for (int i = 0; i < 2; ++i) {
    d.nablaA[i] = covariant_derivative(d.fields.A, d.gamma, i);
    const Vec2 col = covariant_derivative(d.fields.T, d.gamma, i);
    d.nablaT[0][i] = col[0];
    d.nablaT[1][i] = col[1];
    d.df[i] = d.fields.f.partial(unit(i));
    d.dH[i] = 0.5 * (d.fields.A[0][0].partial(unit(i)) + d.fields.A[1][1].partial(unit(i)));
  }
  const Vec2 div = divergence(d, d.nablaA);
  const Vec2 grad_h = mul(d.g_inv, d.dH);
  d.deltaAa = {div[0] - grad_h[0], div[1] - grad_h[1]};
  return d;
}

SurfaceData extract(const Immersion& imm, const Vec2& q) {
  Extrinsic ex = extrinsic(imm, q);
  SurfaceData d;
  d.q = q;
  d.p = ex.p;
  d.g = values_of(ex.g);
  d.g_inv = inverse(d.g);
  d.Jmat = values_of(ex.J);
  d.nu = ex.nu;
  d.eps3 = ex.eps3;
  d.K = brioschi(ex.g);
  d.gamma = intrinsic_christoffels(ex.g, d.g_inv);
  d.g_jet = truncate(ex.g, 1);
  d.J_jet = ex.J;
  d.pi = ex.pi.value();
  d.dpi = {ex.pi.partial(kDu), ex.pi.partial(kDv)};
  return d.with_fields(std::move(ex.fields));
}

Mat2 first_fundamental(const Immersion& imm, const Vec2& q) { return extract(imm, q).g; }

NormalData normal_and_sign(const Immersion& imm, const Vec2& q) {
  const SurfaceData d = extract(imm, q);
  return {d.nu, d.eps3};
}

Mat2 shape_operator(const Immersion& imm, const Vec2& q) { return extract(imm, q).A; }

StructureProjection structure_projection(const Immersion& imm, const Vec2& q) {
  const SurfaceData d = extract(imm, q);
  return {d.T, d.f};
}

double gauss_curvature(const Immersion& imm, const Vec2& q) { return extract(imm, q).K; }

ShapeSplit split_shape(const Mat2& A, const Mat2& /*Jmat*/) {
  ShapeSplit s;
  s.H = 0.5 * trace(A);
  s.Ac = {{{s.H, 0.0}, {0.0, s.H}}};
  s.Aa = {{{A[0][0] - s.H, A[0][1]}, {A[1][0], A[1][1] - s.H}}};
  return s;
}

CovariantData covariant_data(const Immersion& imm, const Vec2& q) {
  const SurfaceData d = extract(imm, q);
  return {d.nablaA, d.nablaT, d.df, d.dH, d.deltaAa};
}

}  // namespace assocfam
