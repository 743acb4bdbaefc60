#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "assocfam/catalog.hpp"
#include "assocfam/compat.hpp"

using namespace assocfam;

namespace {

struct Case {
  std::string name;
  Params params;
};

std::vector<Case> cases() {
  std::vector<Case> out;
  for (const auto& e : list_catalog()) out.push_back({e.name, {}});
  out.push_back({"slice-product", {{"space", "W(1,1,0,0,a=custom[t*t+1],I=[0.1,3])"}}});
  out.push_back({"slice-product", {{"space", "E(1,0.3)"}}});
  out.push_back({"vertical-cylinder", {{"space", "E(0,0.5)"}, {"base", "circle"}}});
  out.push_back({"warped-cylinder", {{"space", "W(1,1,1,0,a=const[1],I=[-1,1])"}}});
  out.push_back({"helicoid-product", {{"space", "E(1,0)"}}});
  out.push_back({"helicoid-product", {{"space", "E(-1,0.25)"}}});
  out.push_back({"graph", {{"space", "E(1,0.4)"}}});
  out.push_back({"graph", {{"space", "W(1,1,1,0,a=cosh[1,0],I=[-1,1])"}}});
  out.push_back({"graph", {{"space", "W(-1,1,1,0,a=exp[1,0],I=[-1,1])"}}});
  out.push_back({"graph", {{"space", "W(-1,-1,-1,0,a=exp[0.5,0.2],I=[-1,1])"}}});
  out.push_back({"warped-cylinder", {{"space", "W(1,-1,-1,1,a=linear[0.5,2],I=[-1,1])"}}});
  return out;
}

bool same_report(const ResidualReport& a, const ResidualReport& b) {
  if (a.pass != b.pass || a.equations.size() != b.equations.size() ||
      a.failures.size() != b.failures.size())
    return false;
  for (std::size_t i = 0; i < a.equations.size(); ++i) {
    const auto &x = a.equations[i], &y = b.equations[i];
    if (x.name != y.name || x.max_abs != y.max_abs || x.mean_abs != y.mean_abs || x.argmax != y.argmax)
      return false;
  }
  return true;
}

}  // namespace

TEST(Compat, EveryImmersedSurfacePassesItsStructureEquations) {
  for (const auto& c : cases()) {
    const Immersion imm = make_surface(c.name, c.params);
    const ResidualReport r = residual_grid(imm, GridSpec{}, 1e-8);
    EXPECT_TRUE(r.pass) << c.name << " in " << imm.space().descriptor() << " max "
                        << r.max_residual();
    EXPECT_TRUE(r.failures.empty());
    EXPECT_EQ(r.equations.size(), imm.space().is_homogeneous() ? 4u : 5u);
  }
}

TEST(Compat, WrongTauShowsUpInGauss) {
  // Slice of S^2 x R checked against the equations of E(1, tau): with |T| = 0
  // the Gauss defect is |K - tau^2 - (1 - 4 tau^2)| = 3 tau^2.
  const Immersion slice = make_surface("slice-product", {{"space", "E(1,0)"}, {"t0", "0"}});
  const double tau = 0.2;
  const ResidualReport r = residual_grid(slice, HomogeneousEquations{1.0, tau}, GridSpec{}, 1e-8);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.equation("gauss").max_abs, 3 * tau * tau, 1e-12);
  // Keeping kappa - 4 tau^2 fixed isolates the tau^2 offset.
  const ResidualReport r2 =
      residual_grid(slice, HomogeneousEquations{1.0 + 4 * tau * tau, tau}, GridSpec{}, 1e-8);
  EXPECT_NEAR(r2.equation("gauss").max_abs, tau * tau, 1e-12);
}

TEST(Compat, WrongSpaceFails) {
  const Immersion hel = make_surface("helicoid-product", {{"space", "E(-1,0)"}});
  const ResidualReport r = residual_grid(hel, HomogeneousEquations{1.0, 0.0}, GridSpec{}, 1e-8);
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.equation("gauss").max_abs, 1e-3);
}

TEST(Compat, FlipPreservesOutcome) {
  for (const auto& c : cases()) {
    const Immersion imm = make_surface(c.name, c.params);
    const ResidualReport a = residual_grid(imm, GridSpec{}, 1e-8);
    const ResidualReport b = residual_grid(imm.flipped(), GridSpec{}, 1e-8);
    EXPECT_EQ(a.pass, b.pass);
    for (std::size_t i = 0; i < a.equations.size(); ++i)
      EXPECT_NEAR(a.equations[i].max_abs, b.equations[i].max_abs, 1e-12);
  }
}

TEST(Compat, FailedPointsAreReported) {
  const Immersion big =
      make_surface("graph", {{"phi", "0.1*u"}, {"u_min", "-2.5"}, {"u_max", "2.5"}});
  const ResidualReport r = residual_grid(big, GridSpec{}, 1e-8);
  EXPECT_FALSE(r.pass);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_EQ(r.failures.front().error, "DomainError");
  // The points that could be evaluated still satisfy the equations.
  EXPECT_LE(r.max_residual(), 1e-8);
}

TEST(Compat, DeterministicAcrossThreadCounts) {
  const Immersion imm = make_surface("graph", {{"space", "E(1,0.4)"}});
  ::setenv("ASSOCFAM_THREADS", "1", 1);
  const ResidualReport a = residual_grid(imm, GridSpec{}, 1e-8);
  ::setenv("ASSOCFAM_THREADS", "7", 1);
  const ResidualReport b = residual_grid(imm, GridSpec{}, 1e-8);
  ::unsetenv("ASSOCFAM_THREADS");
  const ResidualReport c = residual_grid(imm, GridSpec{}, 1e-8);
  EXPECT_TRUE(same_report(a, b));
  EXPECT_TRUE(same_report(a, c));
}

TEST(Compat, AggregateStatistics) {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {2, 0}};
  std::vector<PointOutcome> out(3);
  out[0].values = {1e-10, -3.0};
  out[1].values = {-4e-10, 2.0};
  out[2].values = {4e-10, 3.0};
  const ResidualReport r = aggregate(pts, out, {"a", "b"}, 1e-8);
  EXPECT_EQ(r.equations[0].max_abs, 4e-10);
  EXPECT_EQ(r.equations[0].argmax, (Vec2{1, 0}));  // first maximum wins
  EXPECT_EQ(r.equations[1].argmax, (Vec2{0, 0}));
  EXPECT_NEAR(r.equations[1].mean_abs, 8.0 / 3.0, 1e-15);
  EXPECT_FALSE(r.pass);

  out[2].values = {std::nan(""), 0.0};
  const ResidualReport bad = aggregate(pts, out, {"a", "b"}, 10.0);
  EXPECT_FALSE(bad.pass);
  ASSERT_EQ(bad.failures.size(), 1u);
  EXPECT_EQ(bad.failures[0].error, "NonFinite");
}

TEST(Compat, CompensatedSumIsAccurate) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  s.add(-1.0);
  EXPECT_NEAR(s.value(), 1e-10, 1e-18);  // naive summation returns 0
}
