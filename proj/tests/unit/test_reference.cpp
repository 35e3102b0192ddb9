#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fbms/error.hpp"
#include "fbms/reference.hpp"

using namespace fbms;

TEST(Reference, CriticalCatenoidParameters) {
  const CatenoidParameters p = solve_critical_catenoid();
  EXPECT_NEAR(p.s0 * std::tanh(p.s0), 1.0, 1e-14);
  EXPECT_GT(p.s0, 1.1996);
  EXPECT_LT(p.s0, 1.1997);
  EXPECT_NEAR(p.c * p.c * (std::cosh(p.s0) * std::cosh(p.s0) + p.s0 * p.s0), 1.0, 1e-12);
}

TEST(Reference, ExactCatenoidBoundaryIsTwiceTheArea) {
  const ReferenceSurface s = reference_surface(ReferenceSpec::critical_catenoid());
  EXPECT_NEAR(s.exact_boundary_length, 2.0 * s.exact_area, 1e-12 * s.exact_area);
}

TEST(Reference, SampledAreasConvergeToTheExactOnes) {
  const std::vector<ReferenceSpec> specs = {
      ReferenceSpec::equatorial_disk(), ReferenceSpec::equatorial_disk(1.5), ReferenceSpec::critical_catenoid(),
      ReferenceSpec::ellipsoid_disk({2, 1}, EllipsoidPlane::Equatorial),
      ReferenceSpec::ellipsoid_disk({2, 1}, EllipsoidPlane::Meridian, 0.7), ReferenceSpec::cylinder_disk(0.3)};
  for (const auto& spec : specs) {
    const ReferenceSurface s = reference_surface(spec);
    const double e1 = std::abs(s.sample(16).area() - s.exact_area);
    const double e2 = std::abs(s.sample(32).area() - s.exact_area);
    EXPECT_LT(e2, 0.4 * e1) << s.name();
    EXPECT_LT(e2, 1e-2 * s.exact_area) << s.name();
  }
}

TEST(Reference, BoundaryVerticesLieOnTheDomain) {
  for (const auto& spec : {ReferenceSpec::critical_catenoid(),
                           ReferenceSpec::ellipsoid_disk({2, 1}, EllipsoidPlane::Meridian, 0.3),
                           ReferenceSpec::cylinder_disk(-0.2), ReferenceSpec::equatorial_disk(2.0)}) {
    const ReferenceSurface s = reference_surface(spec);
    const TriMesh m = s.sample(12);
    const LevelSetDomain d = s.domain();
    for (const auto& loop : m.boundary_loops()) {
      for (int v : loop) EXPECT_NEAR(d.value(m.position(v)), 1.0, 1e-12) << s.name();
    }
  }
}

TEST(Reference, ExactValuesOfTheEllipsoidDisks) {
  const ReferenceSurface eq = reference_surface(ReferenceSpec::ellipsoid_disk({2, 1}, EllipsoidPlane::Equatorial));
  EXPECT_NEAR(eq.exact_area, 4 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(eq.exact_boundary_length, 4 * std::numbers::pi, 1e-12);
  const ReferenceSurface mer = reference_surface(ReferenceSpec::ellipsoid_disk({2, 1}, EllipsoidPlane::Meridian));
  EXPECT_NEAR(mer.exact_area, 2 * std::numbers::pi, 1e-12);
  // Ramanujan's approximation is accurate to ~1e-5 for this eccentricity.
  const double a = 2, b = 1, h = (a - b) * (a - b) / ((a + b) * (a + b));
  EXPECT_NEAR(mer.exact_boundary_length, std::numbers::pi * (a + b) * (1 + 3 * h / (10 + std::sqrt(4 - 3 * h))), 1e-4);
}

TEST(Reference, SidecarRoundTrip) {
  for (const auto& spec : {ReferenceSpec::critical_catenoid(), ReferenceSpec::equatorial_disk(1.5),
                           ReferenceSpec::ellipsoid_disk({3, 1}, EllipsoidPlane::Meridian, 0.25),
                           ReferenceSpec::cylinder_disk(0.4)}) {
    const ReferenceSurface s = reference_surface(spec);
    const auto doc = reference_sidecar(s, 20);
    EXPECT_EQ(doc["resolution"], 20);
    const ReferenceSurface back = reference_surface(reference_spec_from_json(doc));
    EXPECT_EQ(back.name(), s.name());
    EXPECT_DOUBLE_EQ(back.exact_area, s.exact_area);
  }
  try {
    reference_spec_from_json({{"kind", "torus"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

TEST(Reference, RejectsTooCoarseResolutions) {
  try {
    reference_surface(ReferenceSpec::critical_catenoid()).sample(4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Reference, PerturbedDiskNoiseIsOdd) {
  for (std::uint64_t seed : {0u, 1u, 7u}) {
    const TriMesh m = perturbed_disk(10, 0.05, seed);
    const TriMesh flat = hex_disk(10);
    double max_dz = 0.0;
    for (int k = 1; k <= 10; ++k) {
      const int start = 1 + 3 * k * (k - 1);
      for (int j = 0; j < 3 * k; ++j) {
        const Vec3& p = m.position(start + j);
        const Vec3& q = m.position(start + j + 3 * k);
        EXPECT_NEAR(flat.position(start + j).x(), -flat.position(start + j + 3 * k).x(), 1e-12);
        EXPECT_NEAR(p.z(), -q.z(), 1e-12);
        max_dz = std::max(max_dz, std::abs(p.z()));
      }
    }
    EXPECT_GT(max_dz, 0.01);
    EXPECT_LE(max_dz, 0.05 + 1e-12);
    for (int v : m.boundary_loops()[0]) EXPECT_NEAR(m.position(v).norm(), 1.0, 1e-12);
  }
  EXPECT_EQ(perturbed_disk(6, 0.05, 3).positions(), perturbed_disk(6, 0.05, 3).positions());
}

TEST(Reference, AnnulusAndCapBoundariesOnTheUnitSphere) {
  const TriMesh annulus = cylinder_annulus(0.4, 32, 12);
  EXPECT_EQ(annulus.boundary_loops().size(), 2u);
  for (const auto& loop : annulus.boundary_loops()) {
    for (int v : loop) EXPECT_NEAR(annulus.position(v).norm(), 1.0, 1e-12);
  }
  const TriMesh cap = spherical_cap(8, 1.0, 0.8);
  for (int v : cap.boundary_loops()[0]) EXPECT_NEAR(cap.position(v).norm(), 1.0, 1e-12);
}
