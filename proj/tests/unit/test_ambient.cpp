#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "assocfam/ambient.hpp"
#include "oracle.hpp"

using namespace assocfam;

namespace {

const std::vector<std::string> kSpaces{
    "E(1,0)",
    "E(-1,0)",
    "E(0,0.5)",
    "E(1,0.3)",
    "E(-1,0.4)",
    "W(1,1,1,0,a=exp[1,0],I=[-1,1])",
    "W(1,-1,-1,0,a=cosh[1,0.5],I=[-1,1])",
    "W(-1,1,1,0,a=exp[0.7,0.1],I=[-1,1])",
    "W(-1,-1,-1,0,a=exp[0.5,0.2],I=[-1,1])",
    "W(1,-1,-1,1,a=linear[0.5,2],I=[-1,1])",
    "W(1,1,0,0,a=custom[t*t+1],I=[0.1,3])",
};

}  // namespace

TEST(Ambient, DescriptorRoundTrip) {
  for (const auto& s : kSpaces) {
    const AmbientSpace a = AmbientSpace::parse(s);
    EXPECT_EQ(a.descriptor(), s);
    EXPECT_EQ(AmbientSpace::parse(a.descriptor()), a);
  }
  EXPECT_EQ(AmbientSpace::parse(" E( 1 , 0 ) ").descriptor(), "E(1,0)");
  EXPECT_EQ(AmbientSpace::parse("W(1,1,1,0,a=exp,I=[-1,1])").descriptor(),
            "W(1,1,1,0,a=exp[1,0],I=[-1,1])");
}

TEST(Ambient, RejectsInvalidDescriptors) {
  EXPECT_THROW(AmbientSpace::parse("E(1)"), ParseError);
  EXPECT_THROW(AmbientSpace::parse("X(1,0)"), ParseError);
  EXPECT_THROW(AmbientSpace::parse("E(a,0)"), ParseError);
  EXPECT_THROW(AmbientSpace::parse("E(0,0)"), ParamOutOfRange);  // kappa = 4 tau^2
  EXPECT_THROW(AmbientSpace::parse("E(1,0.5)"), ParamOutOfRange);
  EXPECT_THROW(AmbientSpace::parse("W(2,1,1,0,a=exp[1,0],I=[-1,1])"), ParamOutOfRange);
  EXPECT_THROW(AmbientSpace::parse("W(1,1,1,0,a=exp[1,0],I=[1,-1])"), ParamOutOfRange);
  EXPECT_THROW(AmbientSpace::parse("W(1,1,1,0,a=sin[1,0],I=[-1,1])"), ParamOutOfRange);  // a <= 0
  EXPECT_THROW(AmbientSpace::parse("W(1,1,1,0,a=nope[1,0],I=[-1,1])"), ParseError);
  EXPECT_THROW(AmbientSpace::parse("W(1,1,1,0,a=exp[1,0,3],I=[-1,1])"), ParseError);
}

TEST(Ambient, MetricMatchesClosedForm) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  for (const auto& s : kSpaces) {
    const AmbientSpace a = AmbientSpace::parse(s);
    for (int i = 0; i < 20; ++i) {
      Vec3 p{U(rng), U(rng), U(rng)};
      if (a.is_warped()) p[2] = 0.5 * (a.warped().lo + a.warped().hi) + 0.4 * U(rng);
      const Mat3 G = a.metric_at(p), R = oracle::metric(a, p);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(G[r][c], R[r][c], 1e-14) << s;
    }
  }
}

TEST(Ambient, ChristoffelsMatchFiniteDifferences) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  for (const auto& s : kSpaces) {
    const AmbientSpace a = AmbientSpace::parse(s);
    for (int i = 0; i < 10; ++i) {
      Vec3 p{U(rng), U(rng), U(rng)};
      if (a.is_warped()) p[2] = 0.5 * (a.warped().lo + a.warped().hi) + 0.4 * U(rng);
      const auto G = a.christoffels_at(p);
      const auto R = oracle::christoffels(a, p);
      for (int k = 0; k < 3; ++k)
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) {
            EXPECT_NEAR(G[k][r][c], R[k][r][c], 1e-9) << s;
            EXPECT_EQ(G[k][r][c], G[k][c][r]);
          }
    }
  }
}

TEST(Ambient, VerticalFieldIsUnitKillingInHomogeneousSpaces) {
  // d_t is a unit Killing field: <grad_X d_t, Y> + <grad_Y d_t, X> = 0.
  const AmbientSpace a = AmbientSpace::parse("E(-1,0.4)");
  const Vec3 p{0.3, -0.2, 0.7};
  const Mat3 G = a.metric_at(p);
  EXPECT_NEAR(G[2][2], 1.0, 1e-15);
  const auto gamma = a.christoffels_at(p);
  Mat3 nabla{};  // nabla[k][i] = component k of grad_{e_i} d_t
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) nabla[k][i] = gamma[k][i][2];
  const Mat3 low = mul(G, nabla);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(low[i][j] + low[j][i], 0.0, 1e-14);
}

TEST(Ambient, WarpDerivatives) {
  const auto w = WarpFunction::parse("cosh[2,0.5]");
  const double t = 0.3;
  const auto d = w.derivatives(t);
  EXPECT_NEAR(d[0], std::cosh(2 * t + 0.5) / 2, 1e-15);
  EXPECT_NEAR(d[1], std::sinh(2 * t + 0.5), 1e-14);
  EXPECT_NEAR(d[2], 2 * std::cosh(2 * t + 0.5), 1e-14);
  EXPECT_NEAR(d[3], 4 * std::sinh(2 * t + 0.5), 1e-13);
  const auto c = WarpFunction::parse("custom[t*t+1]");
  const auto dc = c.derivatives(0.5);
  EXPECT_NEAR(dc[0], 1.25, 1e-15);
  EXPECT_NEAR(dc[1], 1.0, 1e-15);
  EXPECT_NEAR(dc[2], 2.0, 1e-15);
  EXPECT_NEAR(dc[3], 0.0, 1e-15);
}

TEST(Ambient, SpaceFormDetection) {
  // The four solution families of a''a - a'^2 + eps c = 0.
  for (const char* s : {"W(1,-1,-1,0,a=cosh[1,0],I=[-1,1])", "W(1,1,1,0,a=sin[1,0],I=[0.2,2.5])",
                        "W(1,1,1,0,a=sinh[1,0],I=[0.2,2])", "W(1,1,1,0,a=linear[1,0],I=[0.2,2])"}) {
    const AmbientSpace a = AmbientSpace::parse(s);
    EXPECT_TRUE(is_spaceform(a.warped())) << s;
    for (double t = a.warped().lo + 0.01; t < a.warped().hi; t += 0.1)
      EXPECT_LE(std::fabs(spaceform_residual(a.warped(), t)), 1e-12) << s;
  }
  for (const char* s : {"W(1,1,1,0,a=exp[1,0],I=[-1,1])", "W(1,1,1,0,a=const[1],I=[-1,1])",
                        "W(1,1,0,0,a=custom[t*t+1],I=[0.1,3])"}) {
    EXPECT_FALSE(is_spaceform(AmbientSpace::parse(s).warped())) << s;
  }
}

TEST(Ambient, DomainChecks) {
  const AmbientSpace h = AmbientSpace::parse("E(-1,0)");
  EXPECT_TRUE(h.in_domain({1.0, 1.0, 5.0}));
  EXPECT_FALSE(h.in_domain({2.0, 0.5, 0.0}));
  EXPECT_THROW(h.require_domain({2.0, 0.5, 0.0}), DomainError);
  const AmbientSpace w = AmbientSpace::parse("W(1,1,1,0,a=exp[1,0],I=[-1,1])");
  EXPECT_TRUE(w.in_domain({0.0, 0.0, 0.5}));
  EXPECT_FALSE(w.in_domain({0.0, 0.0, 1.0}));
}
