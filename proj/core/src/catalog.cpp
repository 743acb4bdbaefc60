#include "assocfam/catalog.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace assocfam {

namespace {

struct Alias {
  std::string_view alias;
  std::string_view name;
};

constexpr std::array<Alias, 2> kAliases{{
    {"slice", "slice-product"},
    {"nil3-vertical-cylinder", "nil3-vertical-plane"},
}};

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> c;
  c.push_back({"slice-product",
               "E(1,0)",
               "horizontal slice (u, v, t0); totally geodesic in products, umbilical in warped products",
               {{"t0", "auto", "height of the slice; auto = 0 if allowed, else the middle of I"}},
               {-1.0, 1.0, -1.0, 1.0},
               CaseTag::TZero,
               Outcome::ExistsTotallyUmbilical,
               "",
               "T = 0 and f = 1"});
  c.push_back({"vertical-cylinder",
               "E(-1,0)",
               "vertical cylinder over a base curve: geodesic (u, 0, v) or circle (r cos u, r sin u, v)",
               {{"base", "geodesic", "geodesic | circle"},
                {"radius", "0.5", "circle radius in the chart, 0 < r <= 1"}},
               {-1.0, 1.0, -1.0, 1.0},
               CaseTag::TEqualsDt,
               Outcome::ExistsVerticalCylinderProduct,
               "",
               "f = 0; exists only for tau = 0 over a geodesic"});
  c.push_back({"warped-cylinder",
               "W(1,1,1,0,a=exp[1,0],I=[-1,1])",
               "curve times I in a warped product: (u, 0, v)",
               {},
               {-1.0, 1.0, -0.9, 0.9},
               CaseTag::TEqualsDt,
               Outcome::NotExists,
               "Tcondwp",
               "exists only when a is constant"});
  c.push_back({"helicoid-product",
               "E(-1,0)",
               "helicoid (r(s) cos phi, r(s) sin phi, pitch phi) in geodesic polar coordinates",
               {{"pitch", "1", "vertical advance per radian, nonzero"}},
               {0.1, 1.0, 0.0, std::numbers::pi},
               CaseTag::Generic,
               Outcome::ExistsMinimalProduct,
               "",
               "minimal in S2xR and H2xR"});
  c.push_back({"nil3-vertical-plane",
               "E(0,0.5)",
               "vertical plane (u, 0, v) in the Heisenberg group",
               {},
               {-1.0, 1.0, -1.0, 1.0},
               CaseTag::TEqualsDt,
               Outcome::NotExists,
               "relationHandtau",
               "minimal with tau != 0"});
  c.push_back({"tilted-plane-product",
               "E(-1,0)",
               "tilted plane (u, v, slope u)",
               {{"slope", "0.5", "nonzero slope"}},
               {-0.8, 0.8, -0.8, 0.8},
               CaseTag::Generic,
               Outcome::NotExists,
               "relationHandtau",
               "neither minimal nor umbilical"});
  c.push_back({"graph",
               "E(-1,0)",
               "graph (u, v, phi(u, v)) over a fiber chart",
               {{"phi", "0.3*u+0.2*v*v", "expression in u and v"},
                {"u_min", "-0.8", ""},
                {"u_max", "0.8", ""},
                {"v_min", "-0.8", ""},
                {"v_max", "0.8", ""}},
               {-0.8, 0.8, -0.8, 0.8},
               CaseTag::Generic,
               Outcome::NotExists,
               "relationHandtau",
               "default phi is neither minimal nor umbilical"});
  return c;
}

std::string_view resolve(std::string_view name) {
  for (const auto& a : kAliases)
    if (a.alias == name) return a.name;
  return name;
}

class ParamReader {
 public:
  ParamReader(const CatalogEntry& entry, const Params& params) : entry_(entry), params_(params) {
    for (const auto& [k, v] : params_) {
      if (k == "space") continue;
      bool known = false;
      for (const auto& p : entry_.params) known = known || p.name == k;
      if (!known) throw ParseError("surface '" + entry_.name + "' has no parameter '" + k + "'");
    }
  }

  std::string text(const std::string& key) const {
    if (const auto it = params_.find(key); it != params_.end()) return it->second;
    for (const auto& p : entry_.params)
      if (p.name == key) return p.default_value;
    throw InternalError("undeclared catalog parameter '" + key + "'");
  }

  double number(const std::string& key) const {
    const std::string s = text(key);
    try {
      return parse_number(s);
    } catch (const ParseError&) {
      throw ParseError("parameter '" + key + "' is not a number: '" + s + "'");
    }
  }

  AmbientSpace space() const {
    const auto it = params_.find("space");
    return AmbientSpace::parse(it == params_.end() ? entry_.default_space : it->second);
  }

 private:
  const CatalogEntry& entry_;
  const Params& params_;
};

Jet2 constant(double c) { return Jet2(c); }

Immersion make_slice(const CatalogEntry& e, const ParamReader& p) {
  const AmbientSpace space = p.space();
  double t0 = 0.0;
  const std::string t0_text = p.text("t0");
  if (t0_text == "auto") {
    if (space.is_warped()) {
      const auto& w = space.warped();
      t0 = (w.lo < 0.0 && 0.0 < w.hi) ? 0.0 : 0.5 * (w.lo + w.hi);
    }
  } else {
    t0 = p.number("t0");
  }
  if (!std::isfinite(t0)) throw ParamOutOfRange("t0 must be finite");
  if (space.is_warped() && !(space.warped().lo < t0 && t0 < space.warped().hi))
    throw ParamOutOfRange("t0 must lie inside I");
  return Immersion(
      space, e.domain,
      [t0](const Jet2& u, const Jet2& v) { return Vec<Jet2, 3>{u, v, constant(t0)}; },
      Orientation::Auto, e.name);
}

Immersion make_vertical_cylinder(const CatalogEntry& e, const ParamReader& p) {
  const AmbientSpace space = p.space();
  const std::string base = p.text("base");
  if (base == "geodesic") {
    return Immersion(
        space, e.domain,
        [](const Jet2& u, const Jet2& v) { return Vec<Jet2, 3>{u, constant(0.0), v}; },
        Orientation::Auto, e.name);
  }
  if (base == "circle") {
    const double r = p.number("radius");
    if (!(r > 0.0 && r <= 1.0)) throw ParamOutOfRange("radius must lie in (0, 1]");
    return Immersion(
        space, {0.0, 2.0 * std::numbers::pi, -1.0, 1.0},
        [r](const Jet2& u, const Jet2& v) { return Vec<Jet2, 3>{cos(u) * r, sin(u) * r, v}; },
        Orientation::Auto, e.name);
  }
  throw ParamOutOfRange("base must be 'geodesic' or 'circle'");
}

Immersion make_warped_cylinder(const CatalogEntry& e, const ParamReader& p) {
  const AmbientSpace space = p.space();
  if (!space.is_warped()) throw ParamOutOfRange("warped-cylinder needs a warped product space");
  const auto& w = space.warped();
  ChartDomain d = e.domain;
  const double pad = 0.05 * (w.hi - w.lo);
  d.v_min = w.lo + pad;
  d.v_max = w.hi - pad;
  return Immersion(
      space, d, [](const Jet2& u, const Jet2& v) { return Vec<Jet2, 3>{u, constant(0.0), v}; },
      Orientation::Auto, e.name);
}

Immersion make_helicoid(const CatalogEntry& e, const ParamReader& p) {
  const AmbientSpace space = p.space();
  if (!space.is_homogeneous()) throw ParamOutOfRange("helicoid-product needs a space E(kappa,tau)");
  const double pitch = p.number("pitch");
  if (!(std::isfinite(pitch) && pitch != 0.0)) throw ParamOutOfRange("pitch must be nonzero");
  const double kappa = space.homogeneous().kappa;
  const double root = std::sqrt(std::fabs(kappa));
  // Chart radius at geodesic distance s from the origin.
  auto radius = [kappa, root](const Jet2& s) -> Jet2 {
    if (kappa == 0.0) return s;
    if (kappa < 0.0) return tanh(s * (0.5 * root)) * (2.0 / root);
    return tan(s * (0.5 * root)) * (2.0 / root);
  };
  if (kappa > 0.0 && !(e.domain.u_max * root < std::numbers::pi))
    throw ParamOutOfRange("helicoid radius exceeds the chart");
  return Immersion(
      space, e.domain,
      [radius, pitch](const Jet2& s, const Jet2& phi) {
        const Jet2 r = radius(s);
        return Vec<Jet2, 3>{r * cos(phi), r * sin(phi), phi * pitch};
      },
      Orientation::Auto, e.name);
}

Immersion make_vertical_plane(const CatalogEntry& e, const ParamReader& p) {
  return Immersion(
      p.space(), e.domain,
      [](const Jet2& u, const Jet2& v) { return Vec<Jet2, 3>{u, constant(0.0), v}; },
      Orientation::Auto, e.name);
}

Immersion make_tilted_plane(const CatalogEntry& e, const ParamReader& p) {
  const double slope = p.number("slope");
  if (!(std::isfinite(slope) && slope != 0.0)) throw ParamOutOfRange("slope must be nonzero");
  return Immersion(
      p.space(), e.domain,
      [slope](const Jet2& u, const Jet2& v) { return Vec<Jet2, 3>{u, v, u * slope}; },
      Orientation::Auto, e.name);
}

Immersion make_graph(const CatalogEntry& e, const ParamReader& p) {
  const Expression phi = Expression::parse(p.text("phi"), {"u", "v"});
  const ChartDomain d{p.number("u_min"), p.number("u_max"), p.number("v_min"), p.number("v_max")};
  if (!(d.u_min < d.u_max && d.v_min < d.v_max)) throw ParamOutOfRange("graph domain is empty");
  return Immersion(
      p.space(), d,
      [phi](const Jet2& u, const Jet2& v) {
        const std::array<Jet2, 2> args{u, v};
        return Vec<Jet2, 3>{u, v, phi.eval(std::span<const Jet2>(args))};
      },
      Orientation::Auto, e.name);
}

}  // namespace

const std::vector<CatalogEntry>& list_catalog() {
  static const std::vector<CatalogEntry> catalog = build_catalog();
  return catalog;
}

const CatalogEntry& catalog_entry(std::string_view name) {
  const std::string_view n = resolve(name);
  for (const auto& e : list_catalog())
    if (e.name == n) return e;
  throw UnknownEntry("unknown catalog surface '" + std::string(name) + "'");
}

Immersion make_surface(std::string_view name, const Params& params) {
  const CatalogEntry& e = catalog_entry(name);
  const ParamReader p(e, params);
  if (e.name == "slice-product") return make_slice(e, p);
  if (e.name == "vertical-cylinder") return make_vertical_cylinder(e, p);
  if (e.name == "warped-cylinder") return make_warped_cylinder(e, p);
  if (e.name == "helicoid-product") return make_helicoid(e, p);
  if (e.name == "nil3-vertical-plane") return make_vertical_plane(e, p);
  if (e.name == "tilted-plane-product") return make_tilted_plane(e, p);
  if (e.name == "graph") return make_graph(e, p);
  throw InternalError("catalog entry without a constructor: " + e.name);
}

}  // namespace assocfam
