#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fbms/domain_json.hpp"
#include "fbms/domains.hpp"
#include "fbms/error.hpp"
#include "fbms/identities.hpp"
#include "generators.hpp"

using namespace fbms;
using fbms::testing::Gen;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no fbms::Error thrown";
  return ErrorKind::InvalidArgument;
}

/// Central differences of F and grad F.
void expect_derivatives_match(const LevelSetDomain& d, const Vec3& p, double tol) {
  const FieldSample s = d.evaluate(p);
  const double h = 1e-5;
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = h;
    const FieldSample plus = d.evaluate(p + e), minus = d.evaluate(p - e);
    EXPECT_NEAR(s.grad[i], (plus.value - minus.value) / (2 * h), tol) << d.name() << " at " << p.transpose();
    const Vec3 col = (plus.grad - minus.grad) / (2 * h);
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(s.hess(j, i), col[j], tol);
  }
}

}  // namespace

TEST(Domains, QuadricDerivativesMatchFiniteDifferences) {
  Gen gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = LevelSetDomain::quadric(gen.quadric());
    expect_derivatives_match(d, gen.point(2.0), 1e-6);
  }
}

TEST(Domains, ProfileDerivativesMatchFiniteDifferences) {
  Gen gen(2);
  const std::vector<LevelSetDomain> domains = {
      LevelSetDomain::rotational(ProfileCurve::sphere(1.0, -0.9, 0.9)),
      LevelSetDomain::rotational(ProfileCurve::catenoid(0.7, -1.0, 1.0)),
      LevelSetDomain::rotational(ProfileCurve::cone(1.0, 0.4, -1.0, 1.0)),
      LevelSetDomain::rotational(ProfileCurve::cylinder(0.8, -1.0, 1.0)),
      LevelSetDomain::ellipsoid({2.0, 1.0}),
  };
  for (const auto& d : domains) {
    for (int trial = 0; trial < 50; ++trial) {
      Vec3 p = gen.point(0.8);
      expect_derivatives_match(d, p, 1e-5);
    }
  }
}

TEST(Domains, SampledProfileTracksItsSamples) {
  std::vector<double> y, f;
  for (int i = 0; i <= 40; ++i) {
    y.push_back(-1.0 + i / 20.0);
    f.push_back(std::cosh(y.back()));
  }
  const auto p = ProfileCurve::sampled(y, f);
  EXPECT_NEAR(p.f(0.33), std::cosh(0.33), 1e-5);
  EXPECT_NEAR(p.df(0.33), std::sinh(0.33), 1e-3);
}

TEST(Domains, ProjectionLandsOnTheLevelSet) {
  Gen gen(3);
  int projected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto d = LevelSetDomain::quadric(gen.quadric());
    const Vec3 p = gen.point(2.0);
    try {
      const Vec3 q = project_to_boundary(d, p);
      EXPECT_NEAR(d.value(q), 1.0, 1e-10);
      ++projected;
    } catch (const Error& e) {
      EXPECT_TRUE(e.kind() == ErrorKind::ProjectionDiverged || e.kind() == ErrorKind::DegenerateGradient);
    }
  }
  EXPECT_GT(projected, 150);
}

TEST(Domains, OutwardNormalOfTheBall) {
  const auto ball = LevelSetDomain::ball();
  const Vec3 p = Vec3(0.3, -0.4, 0.5).normalized();
  EXPECT_NEAR((ball.outward_normal(p) - p).norm(), 0.0, 1e-15);
  EXPECT_EQ(kind_of([&] { ball.outward_normal(Vec3::Zero()); }), ErrorKind::DegenerateGradient);
}

TEST(Domains, RejectsMalformedSpecs) {
  EXPECT_EQ(kind_of([] { QuadricSpec{3, {1, 1}, 0, 0}.validate(); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { QuadricSpec{3, {2, 1, 1}, 0, 0}.validate(); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { QuadricSpec{3, {0, 0, 0}, 0, 1}.validate(); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { EllipsoidSpec{-1.0, 1.0}.validate(); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { ProfileCurve::sphere(1.0, -1.5, 0.5); }), ErrorKind::InvalidArgument);
}

TEST(Domains, ProfileQueriesOutsideTheIntervalThrow) {
  const auto d = LevelSetDomain::rotational(ProfileCurve::cone(1.0, 0.5, 0.0, 1.0));
  EXPECT_EQ(kind_of([&] { d.evaluate(Vec3(0.1, 0.0, 1.5)); }), ErrorKind::QueryOutsideProfileInterval);
}

TEST(Classifier, MatchesTheGoldenTable) {
  std::ifstream f(std::string(FBMS_GOLDEN_DIR) + "/classifier_table.json");
  ASSERT_TRUE(f) << "golden table missing";
  const auto rows = nlohmann::json::parse(f);
  ASSERT_GE(rows.size(), 6u);
  for (const auto& row : rows) {
    const auto verdict = verdict_to_json(classify(domain_from_json(row["domain"])));
    EXPECT_EQ(verdict, row["verdict"]) << row["name"];
  }
}

TEST(Classifier, HigherDimensionalQuadrics) {
  EXPECT_EQ(classify_quadric({5, {1, 1, 1, 1, 0}, 2.0, 0.0}).outcome, Outcome::NoExistence);
  EXPECT_EQ(classify_quadric({4, {1, 1, 1, -1}, 0.0, 1.0}).citation, "Theorem (2sheets)");
  EXPECT_EQ(classify_quadric({4, {1, 1, 0, -1}, 0.0, 2.0}).citation, "Theorem (cilindcone)");
}

TEST(Classifier, ProfileWithInteriorCriticalLevel) {
  // f = 1 + y^3 on [0, 1] has f' >= 0 with f'(0) = 0: the disk at the origin.
  std::vector<double> y, f;
  for (int i = 0; i <= 50; ++i) {
    y.push_back(i / 50.0);
    f.push_back(1.0 + y.back() * y.back() * y.back());
  }
  const Verdict v = classify_profile(ProfileCurve::sampled(y, f));
  EXPECT_EQ(v.outcome, Outcome::OnlyTotallyGeodesic);
  EXPECT_EQ(classify_profile(ProfileCurve::sphere(1.0, -0.9, 0.9)).outcome, Outcome::Unconstrained);
}

TEST(DomainJson, RoundTripsEveryKind) {
  for (const char* text : {R"({"kind":"ball"})", R"({"kind":"quadric","n":3,"a":[1,1,-1],"b":0,"c":0.5})",
                           R"({"kind":"ellipsoid","a":2,"b":1})",
                           R"({"kind":"profile","family":"cone","f0":1,"slope":0.5,"y0":0,"y1":1})"}) {
    const auto doc = nlohmann::json::parse(text);
    const auto once = domain_to_json(domain_from_json(doc));
    EXPECT_EQ(domain_to_json(domain_from_json(once)), once) << text;
  }
}

TEST(DomainJson, MalformedDocumentsAreParseErrors) {
  for (const char* text : {R"({"kind":"torus"})", R"({"kind":"quadric","a":"x"})", R"([1,2])",
                           R"({"kind":"profile","family":"sphere"})"}) {
    EXPECT_EQ(kind_of([&] { domain_from_json(nlohmann::json::parse(text)); }), ErrorKind::ParseError) << text;
  }
  EXPECT_EQ(kind_of([] { load_domain("/nonexistent/domain.json"); }), ErrorKind::Io);
}

TEST(SignatureScan, ParaboloidHasAFixedSign) {
  const auto r = signature_scan(LevelSetDomain::quadric({3, {1, 1, 0}, 1.0, 0.0}), {2000, {}, 2.0});
  EXPECT_GT(r.samples, 1000);
  EXPECT_EQ(r.directions[2].pattern, SignPattern::Positive);
  EXPECT_EQ(r.conclusion, "no free-boundary minimal hypersurface");
}

TEST(SignatureScan, BallIsMixedInEveryDirection) {
  SignatureOptions o;
  o.samples = 2000;
  o.extra_directions = {Vec3(1, 1, 1), Vec3(1, -2, 0.5)};
  const auto r = signature_scan(LevelSetDomain::ball(), o);
  for (const auto& d : r.directions) EXPECT_EQ(d.pattern, SignPattern::Mixed);
  EXPECT_EQ(r.conclusion, "no conclusion");
}

TEST(SignatureScan, SlabVanishesAcrossIt) {
  const auto r = signature_scan(LevelSetDomain::quadric({3, {0, 0, 1}, 0.0, 0.0}), {2000, {}, 2.0});
  EXPECT_EQ(r.directions[0].pattern, SignPattern::Zero);
  EXPECT_EQ(r.directions[1].pattern, SignPattern::Zero);
  EXPECT_EQ(r.directions[2].pattern, SignPattern::Mixed);
  EXPECT_EQ(r.conclusion, "totally geodesic: contained in a plane orthogonal to v");
}

TEST(SignatureScan, ConeProfileIsSampledInThetaY) {
  const auto r = signature_scan(LevelSetDomain::rotational(ProfileCurve::cone(1.0, 0.5, 0.0, 1.0)), {500, {}, 2.0});
  EXPECT_EQ(r.samples, 500);
  EXPECT_EQ(r.directions[2].pattern, SignPattern::Negative);
}
