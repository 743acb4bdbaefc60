#pragma once

// Built-in surfaces covering every case of the classifier. Coordinates are the
// ambient chart (x, y, t); each entry documents its expected case and verdict.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "assocfam/family.hpp"
#include "assocfam/surface.hpp"

namespace assocfam {

using Params = std::map<std::string, std::string, std::less<>>;

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string description;
};

struct CatalogEntry {
  std::string name;
  std::string default_space;
  std::string description;
  std::vector<ParamSpec> params;  // "space" is always accepted
  ChartDomain domain;
  CaseTag expected_case = CaseTag::Generic;
  Outcome expected_outcome = Outcome::Undetermined;
  std::string expected_obstruction;  // empty when the outcome is an existence
  std::string note;
};

/// Deterministic order.
const std::vector<CatalogEntry>& list_catalog();

/// Throws UnknownEntry for unknown names.
const CatalogEntry& catalog_entry(std::string_view name);

/// Throws UnknownEntry, ParseError (unknown or malformed parameter) or
/// ParamOutOfRange.
Immersion make_surface(std::string_view name, const Params& params = {});

}  // namespace assocfam
