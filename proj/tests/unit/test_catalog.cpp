#include <gtest/gtest.h>

#include <cmath>

#include "assocfam/catalog.hpp"

using namespace assocfam;

TEST(Catalog, EntriesAndOrder) {
  const auto& c = list_catalog();
  ASSERT_GE(c.size(), 7u);
  const std::vector<std::string> names{"slice-product",     "vertical-cylinder",    "warped-cylinder",
                                       "helicoid-product",  "nil3-vertical-plane",  "tilted-plane-product",
                                       "graph"};
  for (std::size_t i = 0; i < names.size(); ++i) EXPECT_EQ(c[i].name, names[i]);
  for (const auto& e : c) {
    EXPECT_FALSE(e.description.empty()) << e.name;
    EXPECT_NO_THROW(make_surface(e.name)) << e.name;
    EXPECT_EQ(make_surface(e.name).space().descriptor(), e.default_space);
  }
}

TEST(Catalog, Aliases) {
  EXPECT_EQ(catalog_entry("slice").name, "slice-product");
  EXPECT_EQ(catalog_entry("nil3-vertical-cylinder").name, "nil3-vertical-plane");
  EXPECT_EQ(make_surface("slice").name(), make_surface("slice-product").name());
}

TEST(Catalog, Errors) {
  EXPECT_THROW(catalog_entry("torus"), UnknownEntry);
  EXPECT_THROW(make_surface("torus"), UnknownEntry);
  EXPECT_THROW(make_surface("graph", {{"radius", "1"}}), ParseError);
  EXPECT_THROW(make_surface("graph", {{"phi", "u+"}}), ParseError);
  EXPECT_THROW(make_surface("graph", {{"u_min", "abc"}}), ParseError);
  EXPECT_THROW(make_surface("graph", {{"u_min", "1"}, {"u_max", "0"}}), ParamOutOfRange);
  EXPECT_THROW(make_surface("vertical-cylinder", {{"base", "ellipse"}}), ParamOutOfRange);
  EXPECT_THROW(make_surface("helicoid-product", {{"pitch", "0"}}), ParamOutOfRange);
  EXPECT_THROW(make_surface("slice-product", {{"space", "E(0,0)"}}), ParamOutOfRange);
  EXPECT_THROW(make_surface("warped-cylinder", {{"space", "E(1,0)"}}), ParamOutOfRange);
}

TEST(Catalog, SliceIsARoundSphere) {
  const Immersion s = make_surface("slice");
  for (const Vec2 q : {Vec2{0, 0}, Vec2{0.5, -0.3}, Vec2{-0.9, 0.9}}) {
    const SurfaceData d = extract(s, q);
    EXPECT_NEAR(d.K, 1.0, 1e-12);
    EXPECT_NEAR(std::fabs(d.f), 1.0, 1e-15);
  }
}

TEST(Catalog, HeisenbergPlaneShapeOperator) {
  // In the positive frame (T, JT): A = [[0, -tau], [-tau, 2H]] with H = 0.
  const Immersion imm = make_surface("nil3-vertical-cylinder");
  for (const Vec2 q : {Vec2{0.1, 0.2}, Vec2{-0.7, 0.4}}) {
    const SurfaceData d = extract(imm, q);
    EXPECT_NEAR(d.H, 0.0, 1e-14);
    EXPECT_NEAR(d.f, 0.0, 1e-15);
    const Vec2 e1 = d.T, e2 = mul(d.Jmat, d.T);
    EXPECT_NEAR(g_norm(d.g, e1), 1.0, 1e-14);
    const double a11 = g_dot(d.g, mul(d.A, e1), e1), a12 = g_dot(d.g, mul(d.A, e1), e2),
                 a22 = g_dot(d.g, mul(d.A, e2), e2);
    EXPECT_NEAR(a11, 0.0, 1e-13);
    EXPECT_NEAR(a12, -0.5, 1e-13);
    EXPECT_NEAR(a22, 0.0, 1e-13);
  }
}

TEST(Catalog, HelicoidIsMinimal) {
  for (const char* space : {"E(-1,0)", "E(1,0)"}) {
    const Immersion imm = make_surface("helicoid-product", {{"space", space}, {"pitch", "0.7"}});
    for (const auto& q : GridSpec{}.points(imm.domain())) EXPECT_LE(std::fabs(extract(imm, q).H), 1e-8);
  }
}

TEST(Catalog, ExpectedCaseTags) {
  for (const auto& e : list_catalog()) {
    const Immersion imm = make_surface(e.name);
    std::vector<SurfaceData> data;
    for (const auto& q : GridSpec{}.points(imm.domain())) data.push_back(extract(imm, q));
    EXPECT_EQ(case_split(data, 1e-6).aggregate, e.expected_case) << e.name;
  }
}
