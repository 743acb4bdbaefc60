#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "assocfam/catalog.hpp"
#include "assocfam/expression.hpp"
#include "assocfam/report_io.hpp"

namespace assocfam::cli {

namespace {

/// Config problems detected after flag parsing.
struct ConfigError : Error {
  using Error::Error;
};

struct RunConfig {
  std::string space;
  std::string surface;
  std::vector<std::string> params;
  std::string grid = "21x21";
  double margin = 0.05;
  std::string thetas = "0,0.39269908169872414,0.78539816339744828,1.1780972450961724";
  std::string law = "canonical";
  double tol = 1e-8;
  double tol_case = 1e-6;
  std::string out;
  std::string format = "json";
};

GridSpec parse_grid(const std::string& text, double margin) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ConfigError("--grid must look like NxM, got '" + text + "'");
  auto count = [&](const std::string& s) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || n < 2 || n > 10000)
      throw ConfigError("--grid sizes must be integers in [2, 10000], got '" + text + "'");
    return n;
  };
  if (!(margin >= 0.0 && margin < 0.5)) throw ConfigError("--margin must lie in [0, 0.5)");
  return GridSpec{count(text.substr(0, x)), count(text.substr(x + 1)), margin};
}

std::vector<double> parse_thetas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double t = parse_number(item);
    if (!std::isfinite(t)) throw ConfigError("theta values must be finite");
    out.push_back(t);
  }
  if (out.empty()) throw ConfigError("--thetas needs at least one value");
  return out;
}

Params parse_params(const RunConfig& cfg) {
  Params p;
  for (const auto& kv : cfg.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    if (key == "space") throw ConfigError("use --space instead of --param space=...");
    if (!p.emplace(key, kv.substr(eq + 1)).second) throw ConfigError("duplicate --param '" + key + "'");
  }
  if (!cfg.space.empty()) p.emplace("space", cfg.space);
  return p;
}

void check_tolerances(const RunConfig& cfg) {
  if (!(cfg.tol > 0.0 && std::isfinite(cfg.tol))) throw ConfigError("--tol must be positive");
  if (!(cfg.tol_case > 0.0 && std::isfinite(cfg.tol_case))) throw ConfigError("--tol-case must be positive");
}

Immersion build_surface(const RunConfig& cfg) {
  if (cfg.surface.empty()) throw ConfigError("--surface is required");
  return make_surface(cfg.surface, parse_params(cfg));
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out.empty()) {
    out << content;
  } else {
    write_atomic(cfg.out, content);
  }
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_tolerances(cfg);
  const GridSpec grid = parse_grid(cfg.grid, cfg.margin);
  const Immersion imm = build_surface(cfg);
  const ResidualReport r = residual_grid(imm, grid, cfg.tol);
  emit(cfg, cfg.format == "csv" ? to_csv(std::vector<ResidualReport>{r}) : to_json(r).dump(), out);
  err << (r.pass ? "PASS" : "FAIL") << "  " << r.surface << " in " << r.space
      << "  max residual " << fmt(r.max_residual()) << "  failed points " << r.failures.size() << '\n';
  return r.pass ? kPass : kSuiteFailure;
}

int cmd_family(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_tolerances(cfg);
  const GridSpec grid = parse_grid(cfg.grid, cfg.margin);
  const std::vector<double> thetas = parse_thetas(cfg.thetas);
  const FamilyLaw law = FamilyLaw::parse(cfg.law);
  const Immersion imm = build_surface(cfg);
  std::vector<ResidualReport> reps;
  try {
    reps = verify_family(imm, law, thetas, grid, cfg.tol);
  } catch (const ParamOutOfRange&) {
    throw;
  } catch (const Error& e) {
    err << "base surface fails its structure equations: " << e.what() << '\n';
    return kSuiteFailure;
  }
  emit(cfg, cfg.format == "csv" ? to_csv(reps) : to_json(reps, law.str()).dump(), out);

  err << "theta";
  for (const auto& e : reps.front().equations) err << "  " << e.name;
  err << "  failed  pass\n";
  std::optional<double> first_fail;
  for (const auto& r : reps) {
    err << format_double(*r.theta);
    for (const auto& e : r.equations) err << "  " << fmt(e.max_abs);
    err << "  " << r.failures.size() << "  " << (r.pass ? "yes" : "NO") << '\n';
    if (!r.pass && !first_fail) first_fail = *r.theta;
  }
  if (first_fail) {
    err << "first failing theta: " << format_double(*first_fail) << '\n';
    return kSuiteFailure;
  }
  return kPass;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  check_tolerances(cfg);
  const GridSpec grid = parse_grid(cfg.grid, cfg.margin);
  const Immersion imm = build_surface(cfg);
  Tolerances tol;
  tol.residual = cfg.tol;
  tol.case_split = cfg.tol_case;
  const Verdict v = classify(imm, grid, tol);
  emit(cfg, cfg.format == "csv" ? to_csv(v) : to_json(v).dump(), out);
  err << to_string(v.outcome);
  if (!v.obstruction.empty())
    err << (v.outcome == Outcome::NotExists ? "  obstruction " : "  witness ") << v.obstruction << "  magnitude "
        << fmt(v.magnitude);
  err << "  case " << to_string(v.case_tag) << '\n';
  return v.outcome == Outcome::Undetermined ? kUndetermined : kPass;
}

int cmd_list(const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == "csv") {
    std::string s = "name,default_space,expected_case,expected_outcome,expected_obstruction\n";
    for (const auto& e : list_catalog())
      s += e.name + ",\"" + e.default_space + "\"," + to_string(e.expected_case) + ',' +
           to_string(e.expected_outcome) + ',' + e.expected_obstruction + '\n';
    emit(cfg, s, out);
    return kPass;
  }
  Json arr = Json::array();
  for (const auto& e : list_catalog()) {
    Json params = Json::array();
    for (const auto& p : e.params)
      params.push(Json::Object{{"name", p.name}, {"default", p.default_value}, {"description", p.description}});
    arr.push(Json::Object{{"name", e.name},
                          {"default_space", e.default_space},
                          {"description", e.description},
                          {"params", std::move(params)},
                          {"domain", Json::Array{e.domain.u_min, e.domain.u_max, e.domain.v_min, e.domain.v_max}},
                          {"expected_case", to_string(e.expected_case)},
                          {"expected_outcome", to_string(e.expected_outcome)},
                          {"expected_obstruction", e.expected_obstruction},
                          {"note", e.note}});
  }
  emit(cfg, arr.dump(), out);
  return kPass;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool surface_opts, bool family_opts) {
  if (surface_opts) {
    sub->add_option("--space", cfg.space, "ambient descriptor, e.g. E(1,0) or W(1,1,1,0,a=exp[1,0],I=[-1,1])");
    sub->add_option("--surface", cfg.surface, "catalog surface name")->required();
    sub->add_option("--param", cfg.params, "surface parameter key=value (repeatable)");
    sub->add_option("--grid", cfg.grid, "sample grid NxM")->capture_default_str();
    sub->add_option("--margin", cfg.margin, "fraction trimmed from each side of the domain")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "residual tolerance")->capture_default_str();
  }
  if (family_opts) {
    sub->add_option("--thetas", cfg.thetas, "comma-separated angles in radians")->capture_default_str();
    sub->add_option("--law", cfg.law, "canonical or custom(F1=..,F2=..,lam=..,mu=..)")->capture_default_str();
  }
  sub->add_option("--out", cfg.out, "report path (stdout when omitted)");
  sub->add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Associate families of surfaces in homogeneous 3-spaces and warped products", "assocfam"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* verify = app.add_subcommand("verify", "check a surface against its structure equations");
  add_common(verify, cfg, true, false);
  auto* family = app.add_subcommand("family", "sweep a generalized associate family over theta");
  add_common(family, cfg, true, true);
  auto* cls = app.add_subcommand("classify", "decide whether a nontrivial associate family exists");
  add_common(cls, cfg, true, false);
  cls->add_option("--tol-case", cfg.tol_case, "threshold separating the f = 0 and T = 0 cases")
      ->capture_default_str();
  auto* list = app.add_subcommand("list", "print the surface catalog");
  add_common(list, cfg, false, false);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (family->parsed()) return cmd_family(cfg, out, err);
    if (cls->parsed()) return cmd_classify(cfg, out, err);
    return cmd_list(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnknownEntry& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParamOutOfRange& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSuiteFailure;
  }
}

}  // namespace assocfam::cli
