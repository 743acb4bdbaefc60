#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "assocfam/catalog.hpp"
#include "assocfam/report_io.hpp"
#include "json.hpp"

using namespace assocfam;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> keys(const ordered_json& j) {
  std::vector<std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) out.push_back(it.key());
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ReportIo, FormatDouble) {
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::nan("")), "null");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "null");
  for (const double x : {1e-300, 3.14159, -2.5e17, 1.0 / 3.0}) EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(ReportIo, JsonLayoutAndEscaping) {
  Json j = Json::object();
  j.set("b", 1).set("a", "q\"\\\n\x01").set("arr", Json::Array{1.5, nullptr}).set("empty", Json::array());
  j.set("nested", Json::Array{Json::Object{{"k", true}}});
  const std::string text = j.dump();
  EXPECT_EQ(text.back(), '\n');
  EXPECT_NE(text.find("\"arr\": [1.5, null]"), std::string::npos);
  EXPECT_NE(text.find("\\u0001"), std::string::npos);
  const auto parsed = ordered_json::parse(text);
  EXPECT_EQ(keys(parsed), (std::vector<std::string>{"b", "a", "arr", "empty", "nested"}));
  EXPECT_EQ(parsed["a"], "q\"\\\n\x01");
  EXPECT_TRUE(parsed["nested"][0]["k"].get<bool>());
  EXPECT_THROW(Json::array().set("x", 1), ContractViolation);
  EXPECT_THROW(Json::object().push(1), ContractViolation);
}

TEST(ReportIo, ResidualReportKeys) {
  const Immersion imm = make_surface("helicoid-product");
  const auto reps = verify_family(imm, FamilyLaw::canonical(), {0.0, 0.5}, GridSpec{5, 4, 0.05}, 1e-8);
  const auto one = ordered_json::parse(to_json(reps[1]).dump());
  EXPECT_EQ(keys(one), (std::vector<std::string>{"surface", "space", "domain", "grid", "tol", "theta", "law",
                                                 "pass", "max_residual", "equations", "failures"}));
  EXPECT_EQ(one["equations"].size(), 4u);
  EXPECT_EQ(one["equations"][0]["name"], reps[1].equations[0].name);
  EXPECT_EQ(one["equations"][0]["max_abs"].get<double>(), reps[1].equations[0].max_abs);

  const auto sweep = ordered_json::parse(to_json(reps, "canonical").dump());
  EXPECT_EQ(keys(sweep), (std::vector<std::string>{"surface", "space", "law", "pass", "first_failing_theta",
                                                   "summary", "reports"}));
  EXPECT_TRUE(sweep["first_failing_theta"].is_null());
  EXPECT_EQ(sweep["summary"].size(), 2u);
  EXPECT_EQ(sweep["summary"][1]["theta"].get<double>(), 0.5);
}

TEST(ReportIo, VerdictJsonAndCsv) {
  const Verdict v = classify(make_surface("nil3-vertical-plane"), GridSpec{});
  const auto j = ordered_json::parse(to_json(v).dump());
  EXPECT_EQ(keys(j), (std::vector<std::string>{"outcome", "obstruction", "case", "magnitude", "surface", "space",
                                               "diagnostics", "regions"}));
  EXPECT_EQ(j["outcome"], "NotExists");
  EXPECT_EQ(j["case"], "T_equals_dt");
  const std::string csv = to_csv(v);
  EXPECT_EQ(csv.rfind("key,value\noutcome,NotExists\n", 0), 0u);
  EXPECT_NE(csv.find("\nspace,\"E(0,0.5)\"\n"), std::string::npos);
}

TEST(ReportIo, ResidualCsvRows) {
  const Immersion imm = make_surface("graph");
  const ResidualReport r = residual_grid(imm, GridSpec{4, 4, 0.05}, 1e-8);
  const std::string csv = to_csv(std::vector<ResidualReport>{r});
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "theta,equation,max_abs,mean_abs,argmax_u,argmax_v,tol,pass");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(line.front(), ',');  // no theta column for a plain verification
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(rows, 4);
}

TEST(ReportIo, WriteAtomicReplacesTheFile) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("assocfam_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::create_directories(dir);
  const fs::path p = dir / "out.json";
  write_atomic(p, "first\n");
  write_atomic(p, "second\n");
  EXPECT_EQ(slurp(p), "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);
  EXPECT_THROW(write_atomic(dir / "missing" / "x.json", "x"), Error);
  fs::remove_all(dir);
}
