#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "assocfam/catalog.hpp"
#include "assocfam/family.hpp"

using namespace assocfam;

namespace {

constexpr double kPi = std::numbers::pi;

/// Random positive-definite g with its complex structure J and a g-self-adjoint A.
struct RandomShape {
  Mat2 g, J, A;
  double H;
};

RandomShape random_shape(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1, 1);
  const double a = 1 + 0.5 * U(rng), b = 0.4 * U(rng), c = 1 + 0.5 * U(rng);
  RandomShape s;
  s.g = {{{a, b}, {b, c}}};
  const double root = 1 / std::sqrt(det(s.g));
  s.J = {{{-b * root, -c * root}, {a * root, b * root}}};
  const Mat2 h{{{U(rng), U(rng)}, {0, U(rng)}}};
  Mat2 hs = h;
  hs[1][0] = h[0][1];
  s.A = mul(inverse(s.g), hs);
  s.H = 0.5 * trace(s.A);
  return s;
}

FamilyLaw random_law(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.05, 0.5);
  const double a = U(rng), b = U(rng), c = U(rng), d = U(rng);
  auto n = [](double x) { return format_shortest(x); };
  return FamilyLaw::parse("custom(F1=1+" + n(c) + "*sin(theta),F2=1-" + n(d) +
                          "*sin(theta)*sin(theta),lam=cos(2*theta)*(1-" + n(a) +
                          "*sin(theta)*sin(theta)),mu=-sin(2*theta)*(1-" + n(b) +
                          "*sin(theta)*sin(theta)))");
}

}  // namespace

TEST(FamilyLaw, ParseAndPrint) {
  EXPECT_TRUE(FamilyLaw::parse("canonical").is_canonical());
  const FamilyLaw law = FamilyLaw::parse("custom(F1=1, F2=1+sin(theta), lam=cos(2*θ), mu=-sin(2*theta))");
  EXPECT_FALSE(law.is_canonical());
  EXPECT_EQ(FamilyLaw::parse(law.str()).str(), law.str());
  const auto v = law(0.3);
  EXPECT_NEAR(v.F2, 1 + std::sin(0.3), 1e-15);
  EXPECT_NEAR(v.lambda, std::cos(0.6), 1e-15);
  const auto c = FamilyLaw::canonical()(0.3);
  EXPECT_EQ(c.F1, 1.0);
  EXPECT_NEAR(c.mu, -std::sin(0.6), 1e-16);
}

TEST(FamilyLaw, RejectsInvalidLaws) {
  EXPECT_THROW(FamilyLaw::parse("rotation"), ParseError);
  EXPECT_THROW(FamilyLaw::parse("custom(F1=1,F2=1,lam=1)"), ParseError);
  EXPECT_THROW(FamilyLaw::parse("custom(F1=1,F2=1,lam=1,mu=0,nu=2)"), ParseError);
  EXPECT_THROW(FamilyLaw::parse("custom(F1=1,F2=1,lam=1,mu=0,mu=0)"), ParseError);
  EXPECT_THROW(FamilyLaw::parse("custom(F1=2,F2=1,lam=1,mu=0)"), ParamOutOfRange);
  EXPECT_THROW(FamilyLaw::parse("custom(F1=1,F2=1,lam=1,mu=0.1+theta)"), ParamOutOfRange);
  EXPECT_THROW(FamilyLaw::parse("custom(F1=1,F2=1,lam=1,mu=x)"), ParseError);
}

TEST(Rotation, DeterminantAndTraceOnRandomSamples) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-1, 1), Th(0, kPi);
  for (int i = 0; i < 1000; ++i) {
    const RandomShape s = random_shape(rng);
    const double theta = Th(rng);
    const FamilyLaw::Values v{1 + U(rng), 1 + U(rng), U(rng), U(rng)};
    const Mat2 At = rotate_shape<double>(s.A, s.H, s.J, theta, v);
    const double expected_det =
        v.F1 * v.F1 * det(s.A) + (v.F2 * v.F2 - v.F1 * v.F1) * s.H * s.H;
    EXPECT_NEAR(det(At), expected_det, 1e-10);
    EXPECT_NEAR(0.5 * trace(At), v.F2 * s.H, 1e-10);
    // A_theta stays g-self-adjoint.
    const Mat2 gA = mul(s.g, At);
    EXPECT_NEAR(gA[0][1], gA[1][0], 1e-12);
  }
}

TEST(Rotation, IdentityAtZero) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const RandomShape s = random_shape(rng);
    const Mat2 At = rotate_shape(s.A, s.H, s.J, 0.0, FamilyLaw::canonical());
    EXPECT_LE(max_abs(At - s.A), 1e-15 * (1 + max_abs(s.A)));
    const Vec2 T{0.3, -0.2};
    EXPECT_EQ(rotate_structure_field(T, s.J, 0.0, FamilyLaw::canonical()), T);
  }
}

TEST(Rotation, CanonicalFieldKeepsItsLength) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const RandomShape s = random_shape(rng);
    const Vec2 T{0.3, -0.4};
    const Vec2 Tt = rotate_structure_field(T, s.J, 0.7, FamilyLaw::canonical());
    EXPECT_NEAR(g_dot(s.g, Tt, Tt), g_dot(s.g, T, T), 1e-14);
    // T_theta = cos 2theta T - sin 2theta J T
    const Vec2 JT = mul(s.J, T);
    EXPECT_NEAR(Tt[0], std::cos(1.4) * T[0] - std::sin(1.4) * JT[0], 1e-15);
  }
}

TEST(Rotation, SolveFTheta) {
  const FamilyLaw canon = FamilyLaw::canonical();
  EXPECT_EQ(solve_f_theta(0.37, 0.9, canon, FThetaMode::homogeneous()), 0.37);
  EXPECT_EQ(solve_f_theta(-0.37, 0.9, canon, FThetaMode::homogeneous()), -0.37);
  const FamilyLaw shrink = FamilyLaw::parse("custom(F1=1,F2=1,lam=cos(theta),mu=0)");
  // s = cos^2 theta: f_theta^2 = 1 - s (1 - f^2)
  const double f = 0.6, th = 0.5, s = std::cos(th) * std::cos(th);
  EXPECT_NEAR(solve_f_theta(f, th, shrink, FThetaMode::homogeneous()), std::sqrt(1 - s * (1 - f * f)),
              1e-15);
  EXPECT_NEAR(solve_f_theta(-f, th, shrink, FThetaMode::homogeneous()), -std::sqrt(1 - s * (1 - f * f)),
              1e-15);
  EXPECT_NEAR(solve_f_theta(f, th, shrink, FThetaMode::homogeneous(), -1),
              -std::sqrt(1 - s * (1 - f * f)), 1e-15);
  const FamilyLaw grow = FamilyLaw::parse("custom(F1=1,F2=1,lam=1+theta,mu=0)");
  EXPECT_THROW(solve_f_theta(0.0, 0.5, grow, FThetaMode::homogeneous()), NoRealSolution);
  // warped: |T_theta|^2 + eps3 f_theta^2 = eps
  const auto mode = FThetaMode::warped_product(-1, -1);
  const double fw = 1.3;  // timelike normal, eps = -1: |T|^2 = -1 + f^2
  const double ft = solve_f_theta(fw, th, shrink, mode);
  EXPECT_NEAR(s * (fw * fw - 1) - ft * ft, -1.0, 1e-14);
}

TEST(Family, ThetaZeroReproducesTheBaseReport) {
  const Immersion imm = make_surface("graph", {{"space", "E(1,0.4)"}});
  const auto reps = verify_family(imm, FamilyLaw::canonical(), {0.0}, GridSpec{}, 1e-8);
  const ResidualReport base = residual_grid(imm, GridSpec{}, 1e-8);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_TRUE(reps[0].pass);
  ASSERT_EQ(reps[0].equations.size(), base.equations.size());
  for (std::size_t i = 0; i < base.equations.size(); ++i) {
    EXPECT_EQ(reps[0].equations[i].max_abs, base.equations[i].max_abs);
    EXPECT_EQ(reps[0].equations[i].mean_abs, base.equations[i].mean_abs);
  }
  EXPECT_EQ(reps[0].theta, 0.0);
  EXPECT_EQ(reps[0].law, "canonical");
}

TEST(Family, MinimalProductSurfacesHaveFamilies) {
  std::vector<double> thetas;
  for (int i = 0; i < 8; ++i) thetas.push_back(i * kPi / 7);
  for (const char* space : {"E(-1,0)", "E(1,0)"}) {
    const Immersion imm = make_surface("helicoid-product", {{"space", space}});
    for (const auto& r : verify_family(imm, FamilyLaw::canonical(), thetas, GridSpec{}, 1e-8))
      EXPECT_TRUE(r.pass) << space << " theta " << *r.theta << " max " << r.max_residual();
  }
  const Immersion cyl = make_surface("warped-cylinder", {{"space", "W(1,1,1,0,a=const[1],I=[-1,1])"}});
  for (const auto& r : verify_family(cyl, FamilyLaw::canonical(), thetas, GridSpec{}, 1e-8))
    EXPECT_TRUE(r.pass) << "theta " << *r.theta;
}

TEST(Family, HeisenbergPlaneHasNoFamily) {
  const Immersion imm = make_surface("nil3-vertical-plane");
  const double tau = 0.5;
  for (const auto& r : verify_family(imm, FamilyLaw::canonical(), {kPi / 8, kPi / 4, 3 * kPi / 8},
                                     GridSpec{}, 1e-8)) {
    EXPECT_FALSE(r.pass);
    const double th = *r.theta;
    // f_theta = 0 and g = du^2 + dv^2 with T = d_v. The X(f) defect is
    // <X, tau (e^{-2J theta} - 1) J T>, with components tau sin 2theta along T and
    // tau (1 - cos 2theta) along J T.
    EXPECT_NEAR(r.equation("f").max_abs,
                tau * std::fmax(std::fabs(std::sin(2 * th)), 1 - std::cos(2 * th)), 1e-12);
    EXPECT_GE(r.equation("f").max_abs, 0.05);
    EXPECT_LE(r.equation("T").max_abs, 1e-12);
  }
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    const FamilyLaw law = random_law(rng);
    for (const auto& r :
         verify_family(imm, law, {kPi / 8, kPi / 4, 3 * kPi / 8}, GridSpec{}, 1e-8)) {
      EXPECT_FALSE(r.pass) << law.str();
      EXPECT_TRUE(r.failures.empty()) << law.str();
    }
  }
}

TEST(Family, BaseFailureIsAnError) {
  const Immersion big =
      make_surface("graph", {{"phi", "0.1*u"}, {"u_min", "-2.5"}, {"u_max", "2.5"}});
  EXPECT_THROW(verify_family(big, FamilyLaw::canonical(), {0.3}, GridSpec{}, 1e-8), Error);
}

TEST(Family, NoRealSolutionIsRecordedPerPoint) {
  const Immersion imm = make_surface("nil3-vertical-plane");
  const FamilyLaw grow = FamilyLaw::parse("custom(F1=1,F2=1,lam=1+theta,mu=0)");
  const auto reps = verify_family(imm, grow, {0.2}, GridSpec{5, 5, 0.05}, 1e-8);
  EXPECT_FALSE(reps[0].pass);
  ASSERT_EQ(reps[0].failures.size(), 25u);
  EXPECT_EQ(reps[0].failures[0].error, "NoRealSolution");
}

TEST(Obstruction, ConsistentWithMemberResiduals) {
  const Immersion imm = make_surface("graph", {{"space", "E(1,0.4)"}});
  std::mt19937_64 rng(3);
  const FamilyLaw law = random_law(rng);
  const auto eqs = equations_for(imm.space());
  for (const Vec2 q : {Vec2{0.1, 0.2}, Vec2{-0.4, 0.5}}) {
    const SurfaceData d = extract(imm, q);
    for (const double th : kProbeThetas) {
      const auto m = obstruction_homogeneous(d, 1.0, 0.4, law, th);
      const auto member = member_residuals(family_member(d, th, law, imm.space()), eqs);
      EXPECT_NEAR(obstruction_value(m, "gauss_new"), member[0], 1e-12);
      EXPECT_NEAR(obstruction_value(m, "T_new"), member[2], 1e-12);
      // T3 is the same defect rewritten through the base equations.
      EXPECT_NEAR(obstruction_value(m, "T3"), member[2], 1e-10);
    }
  }
}

TEST(Obstruction, VanishOnGenuineFamilies) {
  const Immersion imm = make_surface("helicoid-product", {{"space", "E(-1,0)"}});
  const SurfaceData d = extract(imm, {0.5, 1.0});
  for (const double th : kProbeThetas) {
    const auto m = obstruction_homogeneous(d, -1.0, 0.0, FamilyLaw::canonical(), th);
    for (const char* key : {"gauss_new", "codazzi_new", "T_new", "gauss3", "codazzi3", "T3",
                            "lambda_dev", "mu_dev", "relationHandtau_1", "relationHandtau_2"})
      EXPECT_LE(std::fabs(obstruction_value(m, key)), 1e-12) << key;
  }
}

TEST(Obstruction, GaussThreeVariants) {
  // With F1 != 1 only the F1^2 form of the rewritten Gauss relation is an identity.
  const Immersion imm = make_surface("graph", {{"space", "E(1,0.4)"}});
  const SurfaceData d = extract(imm, {0.2, 0.1});
  const FamilyLaw law = FamilyLaw::parse(
      "custom(F1=1+0.3*sin(theta),F2=1,lam=cos(2*theta),mu=-sin(2*theta))");
  const auto eqs = equations_for(imm.space());
  for (const double th : kProbeThetas) {
    const auto m = obstruction_homogeneous(d, 1.0, 0.4, law, th);
    const double member_gauss = member_residuals(family_member(d, th, law, imm.space()), eqs)[0];
    EXPECT_NEAR(obstruction_value(m, "gauss3"), member_gauss, 1e-10);
    EXPECT_GT(std::fabs(obstruction_value(m, "gauss3_linear") - member_gauss), 1e-6);
  }
}

TEST(Obstruction, CasePreconditions) {
  const SurfaceData nil = extract(make_surface("nil3-vertical-plane"), {0.1, 0.1});
  EXPECT_THROW(obstruction_homogeneous(nil, 0.0, 0.5, FamilyLaw::canonical(), 0.3), CaseViolation);
  const Immersion ws = make_surface("slice-product", {{"space", "W(1,1,0,0,a=custom[t*t+1],I=[0.1,3])"}});
  const SurfaceData s = extract(ws, {0.1, 0.1});
  EXPECT_THROW(obstruction_warped(s, ws.space().warped(), FamilyLaw::canonical(), 0.3), CaseViolation);

  const Immersion g = make_surface("graph", {{"space", "W(1,1,1,0,a=cosh[1,0],I=[-1,1])"}});
  const SurfaceData gd = extract(g, {0.2, 0.3});
  FieldJets umb = gd.fields;
  const Jet2 H = (umb.A[0][0] + umb.A[1][1]) * 0.5;
  umb.A = {{{H, H * 0.0}, {H * 0.0, H}}};
  EXPECT_THROW(obstruction_warped(gd.with_fields(umb), g.space().warped(), FamilyLaw::canonical(), 0.3),
               UmbilicalPoint);
  const auto m = obstruction_warped(gd, g.space().warped(), FamilyLaw::canonical(), 0.3);
  for (const auto& [k, v] : m) EXPECT_TRUE(std::isfinite(v)) << k;
  EXPECT_GT(obstruction_value(m, "W_norm"), 0.0);
}

TEST(Obstruction, WarpedRewritesMatchMemberResiduals) {
  // The rewritten Gauss and T identities agree with the member residuals.
  const Immersion g = make_surface("graph", {{"space", "W(1,1,1,0,a=cosh[1,0],I=[-1,1])"}});
  const SurfaceData d = extract(g, {0.2, 0.3});
  const auto eqs = equations_for(g.space());
  for (const double th : kProbeThetas) {
    const auto m = obstruction_warped(d, g.space().warped(), FamilyLaw::canonical(), th);
    const auto member = member_residuals(family_member(d, th, FamilyLaw::canonical(), g.space()), eqs);
    EXPECT_NEAR(obstruction_value(m, "gausswp3"), member[0], 1e-10);
    EXPECT_NEAR(obstruction_value(m, "twp3"), member[2], 1e-10);
  }
}

TEST(Classify, CaseSplit) {
  const Immersion mixed = make_surface("slice-product", {{"space", "E(1,0.3)"}});
  const Verdict v = classify(mixed, GridSpec{});
  EXPECT_EQ(v.outcome, Outcome::Undetermined);
  EXPECT_EQ(v.case_tag, CaseTag::Mixed);
  ASSERT_EQ(v.regions.size(), 2u);
  EXPECT_EQ(v.regions[0].case_tag, CaseTag::TZero);
  EXPECT_EQ(v.regions[1].case_tag, CaseTag::Generic);
}

TEST(Classify, CatalogVerdicts) {
  for (const auto& e : list_catalog()) {
    const Immersion imm = make_surface(e.name);
    const Verdict v = classify(imm, GridSpec{});
    EXPECT_EQ(v.case_tag, e.expected_case) << e.name;
    EXPECT_EQ(v.outcome, e.expected_outcome) << e.name;
    if (!e.expected_obstruction.empty()) EXPECT_EQ(v.obstruction, e.expected_obstruction) << e.name;
    if (v.outcome == Outcome::NotExists) EXPECT_GT(v.magnitude, 0.0) << e.name;
  }
}

TEST(Classify, CaseVerdicts) {
  auto outcome = [](const char* name, Params p) {
    return classify(make_surface(name, std::move(p)), GridSpec{}).outcome;
  };
  EXPECT_EQ(outcome("vertical-cylinder", {{"space", "E(1,0)"}}), Outcome::ExistsVerticalCylinderProduct);
  EXPECT_EQ(outcome("vertical-cylinder", {{"space", "E(-1,0.3)"}}), Outcome::NotExists);
  EXPECT_EQ(outcome("vertical-cylinder", {{"base", "circle"}}), Outcome::NotExists);
  EXPECT_EQ(outcome("warped-cylinder", {}), Outcome::NotExists);
  EXPECT_EQ(outcome("warped-cylinder", {{"space", "W(1,1,1,0,a=const[1],I=[-1,1])"}}),
            Outcome::ExistsVerticalCylinderProduct);
  EXPECT_EQ(outcome("slice-product", {{"space", "E(-1,0)"}}), Outcome::ExistsTotallyUmbilical);
  EXPECT_EQ(outcome("slice-product", {{"space", "W(1,1,0,0,a=custom[t*t+1],I=[0.1,3])"}}),
            Outcome::ExistsTotallyUmbilical);
  EXPECT_EQ(outcome("helicoid-product", {{"space", "E(1,0)"}}), Outcome::ExistsMinimalProduct);
  EXPECT_EQ(outcome("helicoid-product", {{"space", "E(0,0.5)"}}), Outcome::NotExists);
  EXPECT_EQ(outcome("graph", {{"space", "W(1,1,1,0,a=cosh[1,0],I=[-1,1])"}}), Outcome::NotExists);
}

TEST(Classify, SpaceFormsAreExcluded) {
  for (const char* s : {"W(1,-1,-1,0,a=cosh[1,0],I=[-1,1])", "W(1,1,1,0,a=sin[1,0],I=[0.2,2.5])",
                        "W(1,1,1,0,a=sinh[1,0],I=[0.2,2])", "W(1,1,1,0,a=linear[1,0],I=[0.2,2])"}) {
    const Verdict v = classify(make_surface("graph", {{"space", s}, {"phi", "0.3*u+0.2*v*v+1"}}), GridSpec{});
    EXPECT_EQ(v.outcome, Outcome::SpaceFormExcluded) << s;
    EXPECT_LE(v.magnitude, 1e-12);
  }
}

TEST(Classify, FlipInvariance) {
  for (const auto& e : list_catalog()) {
    const Immersion imm = make_surface(e.name);
    EXPECT_EQ(classify(imm, GridSpec{}).outcome, classify(imm.flipped(), GridSpec{}).outcome) << e.name;
  }
}
