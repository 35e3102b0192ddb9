#include <gtest/gtest.h>

#include <cmath>

#include "fbms/error.hpp"
#include "fbms/identities.hpp"
#include "fbms/reference.hpp"
#include "generators.hpp"

using namespace fbms;
using fbms::testing::Gen;

namespace {

IdentityLevel single(const IdentityKind& kind, const TriMesh& mesh, const LevelSetDomain& domain) {
  return evaluate_identity(kind, mesh, compute_geometry(mesh), domain);
}

}  // namespace

TEST(Identities, FundamentalOfOneMatchesTheIndependentAssembly) {
  for (const auto& spec : {ReferenceSpec::equatorial_disk(), ReferenceSpec::critical_catenoid(),
                           ReferenceSpec::ellipsoid_disk({2, 1}, EllipsoidPlane::Meridian, 0.4)}) {
    const auto [mesh, surface] = make_reference(spec, 16);
    const LevelSetDomain domain = surface.domain();
    const IdentityLevel lv = single(IdentityKind::fundamental(TestFunction::One), mesh, domain);
    const auto [lhs, rhs] = fundamental_particular(mesh, compute_geometry(mesh), domain);
    EXPECT_NEAR(lv.lhs, lhs, 1e-12 * std::max(1.0, std::abs(lhs))) << surface.name();
    EXPECT_NEAR(lv.rhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs))) << surface.name();
  }
}

TEST(Identities, BallHalfMinkowskiAndHomogeneousAgreeOnTheBall) {
  const auto [mesh, surface] = make_reference(ReferenceSpec::critical_catenoid(), 24);
  const LevelSetDomain ball = LevelSetDomain::ball();
  const IdentityLevel half = single(IdentityKind::ball_half(TestFunction::One), mesh, ball);
  const IdentityLevel mink = single(IdentityKind::minkowski(), mesh, ball);
  const IdentityLevel homo = single(IdentityKind::homogeneous(2), mesh, ball);
  EXPECT_NEAR(half.lhs, mink.lhs, 1e-12);
  EXPECT_NEAR(half.rhs, mink.rhs, 1e-12);
  EXPECT_NEAR(homo.lhs, mink.lhs, 1e-12);
  EXPECT_NEAR(homo.rhs, mink.rhs, 1e-12);
}

TEST(Identities, MinkowskiConvergesOnTheDisk) {
  const auto [mesh, surface] = make_reference(ReferenceSpec::equatorial_disk(), 8);
  IdentityOptions options;
  options.levels = 3;
  options.refiner = [spec = surface](const TriMesh&, int level) { return spec.sample(8 << level); };
  const IdentityReport report = check_identity(IdentityKind::minkowski(), mesh, surface.domain(), options);
  ASSERT_EQ(report.levels.size(), 3u);
  EXPECT_TRUE(report.hypothesis_met);
  ASSERT_TRUE(report.estimated_order.has_value());
  EXPECT_GT(*report.estimated_order, 1.5);
  EXPECT_LT(report.levels.back().relative_residual, report.levels.front().relative_residual);
}

TEST(Identities, MinimalityGateIsRecorded) {
  const TriMesh bumpy = perturbed_disk(8, 0.1, 5);
  const IdentityReport report = check_identity(IdentityKind::minkowski(), bumpy, LevelSetDomain::ball());
  EXPECT_FALSE(report.hypothesis_met);
  EXPECT_NE(report.hypothesis_message.find("minimality"), std::string::npos);
  EXPECT_EQ(report.levels.size(), 1u);
  const IdentityReport fundamental =
      check_identity(IdentityKind::fundamental(TestFunction::One), bumpy, LevelSetDomain::ball());
  EXPECT_TRUE(fundamental.hypothesis_met);
}

TEST(Identities, BallHalfOffTheBallThrows) {
  const auto [mesh, surface] = make_reference(ReferenceSpec::ellipsoid_disk({2, 1}, EllipsoidPlane::Equatorial), 8);
  try {
    check_identity(IdentityKind::ball_half(TestFunction::One), mesh, surface.domain());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Identities, QuadricLaplacianImprovesWithResolution) {
  const ReferenceSurface surface = reference_surface(ReferenceSpec::cylinder_disk(0.0));
  double previous = 1.0;
  for (int res : {10, 20, 40}) {
    const TriMesh mesh = surface.sample(res);
    const IdentityLevel lv = single(IdentityKind::quadric_laplacian(), mesh, surface.domain());
    EXPECT_LT(lv.relative_residual, 0.7 * previous) << "resolution " << res;
    previous = lv.relative_residual;
  }
  EXPECT_LT(previous, 1e-2);
}

TEST(Identities, RotationalIdentityVanishesForTheSphereProfile) {
  // Both integrands vanish identically when f(y) = sqrt(1 - y^2), whatever the surface.
  const LevelSetDomain domain = LevelSetDomain::rotational(ProfileCurve::sphere(1.0, -0.95, 0.95));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TriMesh mesh = perturbed_disk(6, 0.05, seed);
    const IdentityReport report = check_identity(IdentityKind::rotational_combined(), mesh, domain);
    EXPECT_TRUE(report.exact) << "seed " << seed;
    EXPECT_LT(report.levels[0].residual, 1e-12);
  }
}

TEST(Identities, LoglogSlopeRecoversPowerLaws) {
  Gen gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const double order = gen.uniform(0.5, 4.0), scale = gen.uniform(1e-3, 1e3);
    std::vector<double> x, y;
    const int n = gen.integer(2, 6);
    for (int i = 0; i < n; ++i) {
      x.push_back(std::pow(0.5, i) * gen.uniform(0.8, 1.2));
      y.push_back(scale * std::pow(x.back(), order));
    }
    const auto slope = loglog_slope(x, y);
    ASSERT_TRUE(slope.has_value());
    EXPECT_NEAR(*slope, order, 1e-9);
  }
  EXPECT_FALSE(loglog_slope({1.0}, {1.0}).has_value());
  EXPECT_FALSE(loglog_slope({1.0, 0.5}, {0.0, 0.0}).has_value());
}

TEST(Identities, ParsingTagsAndTestFunctions) {
  EXPECT_EQ(parse_identity("minkowski").tag, IdentityKind::Tag::Minkowski);
  EXPECT_EQ(parse_identity("ball-half", TestFunction::X3).phi, TestFunction::X3);
  EXPECT_EQ(parse_identity("homogeneous", TestFunction::One, 4).degree, 4);
  EXPECT_EQ(parse_test_function("|x|^2"), TestFunction::NormSq);
  EXPECT_EQ(parse_test_function("normsq"), TestFunction::NormSq);
  for (TestFunction phi : {TestFunction::One, TestFunction::X1, TestFunction::X2, TestFunction::X3,
                           TestFunction::NormSq, TestFunction::X1X2}) {
    EXPECT_EQ(parse_test_function(to_string(phi)), phi);
  }
  EXPECT_DOUBLE_EQ(evaluate(TestFunction::X1X2, {2, 3, 5}), 6.0);
  EXPECT_DOUBLE_EQ(evaluate(TestFunction::NormSq, {2, 3, 5}), 38.0);
  for (const char* bad : {"stokes", ""}) {
    EXPECT_THROW(parse_identity(bad), Error);
  }
  EXPECT_THROW(parse_test_function("x4"), Error);
}

TEST(Identities, InteriorLaplacianOfLinearFieldsVanishes) {
  Gen gen(4);
  const TriMesh mesh = gen.planar_grid(8, 0.2);
  const DiscreteGeometry geom = compute_geometry(mesh);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec3 w = gen.point(1.0);
    std::vector<double> values;
    for (const Vec3& p : mesh.positions()) values.push_back(w.dot(p));
    for (double lap : interior_laplacian(mesh, geom, values)) EXPECT_NEAR(lap, 0.0, 1e-10);
  }
}
