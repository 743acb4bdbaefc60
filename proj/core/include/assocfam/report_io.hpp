#pragma once

// Deterministic report serialization: fixed key order, doubles printed with
// 17 significant digits, non-finite values as null.

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "assocfam/compat.hpp"
#include "assocfam/family.hpp"

namespace assocfam {

class Json {
 public:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;

  Json() = default;
  Json(std::nullptr_t) {}                               // NOLINT(google-explicit-constructor)
  Json(bool b) : v_(b) {}                               // NOLINT(google-explicit-constructor)
  Json(double x) : v_(x) {}                             // NOLINT(google-explicit-constructor)
  Json(int x) : v_(static_cast<double>(x)) {}           // NOLINT(google-explicit-constructor)
  Json(std::size_t x) : v_(static_cast<double>(x)) {}   // NOLINT(google-explicit-constructor)
  Json(std::string s) : v_(std::move(s)) {}             // NOLINT(google-explicit-constructor)
  Json(const char* s) : v_(std::string(s)) {}           // NOLINT(google-explicit-constructor)
  Json(Array a) : v_(std::move(a)) {}                   // NOLINT(google-explicit-constructor)
  Json(Object o) : v_(std::move(o)) {}                  // NOLINT(google-explicit-constructor)

  static Json array() { return Json(Array{}); }
  static Json object() { return Json(Object{}); }

  /// Appends a key (objects) or an element (arrays); keys keep insertion order.
  Json& set(std::string key, Json value);
  Json& push(Json value);

  /// Two-space indented text with a trailing newline.
  std::string dump() const;

 private:
  void write(std::string& out, int indent) const;

  std::variant<std::nullptr_t, bool, double, std::string, Array, Object> v_{nullptr};
};

/// %.17g, or "null" when x is not finite.
std::string format_double(double x);

Json to_json(const ResidualReport& r);
Json to_json(const std::vector<ResidualReport>& sweep, const std::string& law);
Json to_json(const Verdict& v);
Json to_json(const SurfaceData& d);

/// One row per (theta, equation); theta is empty for a plain verification.
std::string to_csv(const std::vector<ResidualReport>& reports);
/// key,value rows.
std::string to_csv(const Verdict& v);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace assocfam
