#include "assocfam/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include <unistd.h>

namespace assocfam {

namespace {

void escape(std::string& out, const std::string& s) {
  out += '"';
  for (const char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

void newline(std::string& out, int indent) {
  out += '\n';
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
}

Json vec_json(const Vec2& v) { return Json::Array{v[0], v[1]}; }

Json mat_json(const Mat2& m) {
  return Json::Array{Json::Array{m[0][0], m[0][1]}, Json::Array{m[1][0], m[1][1]}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

Json& Json::set(std::string key, Json value) {
  auto* o = std::get_if<Object>(&v_);
  if (!o) throw ContractViolation("Json::set on a non-object");
  o->emplace_back(std::move(key), std::move(value));
  return *this;
}

Json& Json::push(Json value) {
  auto* a = std::get_if<Array>(&v_);
  if (!a) throw ContractViolation("Json::push on a non-array");
  a->push_back(std::move(value));
  return *this;
}

std::string Json::dump() const {
  std::string out;
  write(out, 0);
  out += '\n';
  return out;
}

void Json::write(std::string& out, int indent) const {
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (const bool* b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (const double* x = std::get_if<double>(&v_)) {
    out += format_double(*x);
  } else if (const std::string* s = std::get_if<std::string>(&v_)) {
    escape(out, *s);
  } else if (const Array* a = std::get_if<Array>(&v_)) {
    if (a->empty()) {
      out += "[]";
      return;
    }
    const bool flat = std::all_of(a->begin(), a->end(), [](const Json& j) {
      return std::holds_alternative<double>(j.v_) || std::holds_alternative<std::nullptr_t>(j.v_);
    });
    out += '[';
    for (std::size_t i = 0; i < a->size(); ++i) {
      if (i > 0) out += flat ? ", " : ",";
      if (!flat) newline(out, indent + 1);
      (*a)[i].write(out, indent + 1);
    }
    if (!flat) newline(out, indent);
    out += ']';
  } else {
    const Object& o = std::get<Object>(v_);
    if (o.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    for (std::size_t i = 0; i < o.size(); ++i) {
      if (i > 0) out += ',';
      newline(out, indent + 1);
      escape(out, o[i].first);
      out += ": ";
      o[i].second.write(out, indent + 1);
    }
    newline(out, indent);
    out += '}';
  }
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const ResidualReport& r) {
  Json j = Json::object();
  j.set("surface", r.surface);
  j.set("space", r.space);
  j.set("domain", Json::Object{{"u_min", r.domain.u_min},
                               {"u_max", r.domain.u_max},
                               {"v_min", r.domain.v_min},
                               {"v_max", r.domain.v_max}});
  j.set("grid", Json::Object{{"nu", r.grid.nu}, {"nv", r.grid.nv}, {"margin", r.grid.margin}});
  j.set("tol", r.tol);
  if (r.theta) j.set("theta", *r.theta);
  if (!r.law.empty()) j.set("law", r.law);
  j.set("pass", r.pass);
  j.set("max_residual", r.max_residual());
  Json eqs = Json::array();
  for (const auto& e : r.equations) {
    eqs.push(Json::Object{{"name", e.name},
                          {"max_abs", e.max_abs},
                          {"mean_abs", e.mean_abs},
                          {"argmax", vec_json(e.argmax)}});
  }
  j.set("equations", std::move(eqs));
  Json fails = Json::array();
  for (const auto& f : r.failures)
    fails.push(Json::Object{{"q", vec_json(f.q)}, {"error", f.error}, {"message", f.message}});
  j.set("failures", std::move(fails));
  return j;
}

Json to_json(const std::vector<ResidualReport>& sweep, const std::string& law) {
  Json j = Json::object();
  bool pass = true;
  std::optional<double> first_fail;
  for (const auto& r : sweep) {
    pass = pass && r.pass;
    if (!r.pass && !first_fail) first_fail = r.theta.value_or(0.0);
  }
  j.set("surface", sweep.empty() ? std::string() : sweep.front().surface);
  j.set("space", sweep.empty() ? std::string() : sweep.front().space);
  j.set("law", law);
  j.set("pass", pass);
  j.set("first_failing_theta", first_fail ? Json(*first_fail) : Json(nullptr));
  Json summary = Json::array();
  for (const auto& r : sweep) {
    Json row = Json::object();
    row.set("theta", r.theta.value_or(0.0));
    row.set("pass", r.pass);
    for (const auto& e : r.equations) row.set(e.name, e.max_abs);
    row.set("failed_points", r.failures.size());
    summary.push(std::move(row));
  }
  j.set("summary", std::move(summary));
  Json reports = Json::array();
  for (const auto& r : sweep) reports.push(to_json(r));
  j.set("reports", std::move(reports));
  return j;
}

Json to_json(const Verdict& v) {
  Json j = Json::object();
  j.set("outcome", to_string(v.outcome));
  j.set("obstruction", v.obstruction);
  j.set("case", to_string(v.case_tag));
  j.set("magnitude", v.magnitude);
  j.set("surface", v.surface);
  j.set("space", v.space);
  Json diag = Json::object();
  for (const auto& [k, x] : v.diagnostics) diag.set(k, x);
  j.set("diagnostics", std::move(diag));
  Json regions = Json::array();
  for (const auto& r : v.regions) {
    regions.push(Json::Object{{"case", to_string(r.case_tag)},
                              {"points", r.points},
                              {"outcome", to_string(r.outcome)},
                              {"obstruction", r.obstruction},
                              {"magnitude", r.magnitude}});
  }
  j.set("regions", std::move(regions));
  return j;
}

Json to_json(const SurfaceData& d) {
  Json j = Json::object();
  j.set("q", vec_json(d.q));
  j.set("p", Json::Array{d.p[0], d.p[1], d.p[2]});
  j.set("g", mat_json(d.g));
  j.set("J", mat_json(d.Jmat));
  j.set("nu", Json::Array{d.nu[0], d.nu[1], d.nu[2]});
  j.set("eps3", d.eps3);
  j.set("A", mat_json(d.A));
  j.set("T", vec_json(d.T));
  j.set("f", d.f);
  j.set("H", d.H);
  j.set("K", d.K);
  j.set("pi", d.pi);
  return j;
}

std::string to_csv(const std::vector<ResidualReport>& reports) {
  std::string out = "theta,equation,max_abs,mean_abs,argmax_u,argmax_v,tol,pass\n";
  for (const auto& r : reports) {
    const std::string theta = r.theta ? format_double(*r.theta) : std::string();
    for (const auto& e : r.equations) {
      out += theta + ',' + csv_field(e.name) + ',' + format_double(e.max_abs) + ',' +
             format_double(e.mean_abs) + ',' + format_double(e.argmax[0]) + ',' +
             format_double(e.argmax[1]) + ',' + format_double(r.tol) + ',' +
             (e.max_abs <= r.tol && r.failures.empty() ? "true" : "false") + '\n';
    }
  }
  return out;
}

std::string to_csv(const Verdict& v) {
  std::string out = "key,value\n";
  out += "outcome," + to_string(v.outcome) + '\n';
  out += "obstruction," + csv_field(v.obstruction) + '\n';
  out += "case," + to_string(v.case_tag) + '\n';
  out += "magnitude," + format_double(v.magnitude) + '\n';
  out += "surface," + csv_field(v.surface) + '\n';
  out += "space," + csv_field(v.space) + '\n';
  for (const auto& [k, x] : v.diagnostics) out += csv_field(k) + ',' + format_double(x) + '\n';
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open '" + tmp.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move report into '" + path.string() + "': " + ec.message());
  }
}

}  // namespace assocfam
