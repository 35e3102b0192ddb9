#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fbms/error.hpp"
#include "fbms/reference.hpp"
#include "fbms/solver.hpp"

using namespace fbms;

TEST(Solver, PerturbedDiskFlowsBackToTheEquatorialDisk) {
  const TriMesh start = perturbed_disk(8, 0.05, 11);
  const auto [mesh, report] = solve_free_boundary(start, LevelSetDomain::ball());
  ASSERT_TRUE(report.converged) << report.residual_H << " " << report.residual_angle;
  EXPECT_LE(report.residual_H, 1e-3);
  EXPECT_LE(report.residual_angle, 1e-2);
  EXPECT_NEAR(report.final_area, std::numbers::pi, 2e-2);
  for (std::size_t i = 1; i < report.energy_trace.size(); ++i) {
    EXPECT_LE(report.energy_trace[i], report.energy_trace[i - 1] + 1e-12) << "iteration " << i;
  }
  EXPECT_EQ(report.energy_trace.size(), static_cast<std::size_t>(report.iterations) + 1);
  double max_z = 0.0;
  for (const Vec3& p : mesh.positions()) max_z = std::max(max_z, std::abs(p.z()));
  EXPECT_LT(max_z, 1e-2);
}

TEST(Solver, EllipsoidEquatorialDiskIsAFixedPoint) {
  const auto [start, surface] = make_reference(ReferenceSpec::ellipsoid_disk({2, 1}, EllipsoidPlane::Equatorial), 10);
  SolveConfig config;
  config.min_iters = 20;
  config.tangential_smoothing = 0.0;
  const auto [mesh, report] = solve_free_boundary(start, surface.domain(), config);
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(report.iterations, 20);
  EXPECT_LE(report.last_displacement, 1e-8);
  for (const Vec3& p : mesh.positions()) EXPECT_NEAR(p.z(), 0.0, 1e-12);
}

TEST(Solver, ConvergedInputNeedsNoIterations) {
  const auto [start, surface] = make_reference(ReferenceSpec::equatorial_disk(), 8);
  const auto [mesh, report] = solve_free_boundary(start, surface.domain());
  EXPECT_TRUE(report.converged);
  EXPECT_EQ(report.iterations, 0);
  EXPECT_EQ(mesh.positions(), start.positions());
}

TEST(Solver, IterationBudgetExhaustedIsReportedNotThrown) {
  SolveConfig config;
  config.max_iters = 5;
  const auto [mesh, report] = solve_free_boundary(perturbed_disk(8, 0.05, 2), LevelSetDomain::ball(), config);
  EXPECT_FALSE(report.converged);
  EXPECT_EQ(report.iterations, 5);
}

TEST(Solver, ConfigValidation) {
  auto expect_invalid = [](SolveConfig config) {
    try {
      config.validate();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
  };
  SolveConfig c;
  c.tol_H = 0.0;
  expect_invalid(c);
  c = {};
  c.tol_angle = -1.0;
  expect_invalid(c);
  c = {};
  c.step = 0.0;
  expect_invalid(c);
  c = {};
  c.max_iters = -1;
  expect_invalid(c);
  EXPECT_NO_THROW(SolveConfig{}.validate());
}

TEST(Solver, BoundaryFarFromTheDomainIsRejected) {
  const TriMesh disk = hex_disk(4, 0.5);
  try {
    solve_free_boundary(disk, LevelSetDomain::ball());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Solver, TriangleQuality) {
  const TriMesh tri({{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2, 0}}, {{0, 1, 2}});
  EXPECT_NEAR(min_triangle_quality(tri), 1.0, 1e-14);
  const TriMesh flat({{0, 0, 0}, {1, 0, 0}, {0.5, 1e-3, 0}}, {{0, 1, 2}});
  EXPECT_LT(min_triangle_quality(flat), 1e-2);
}
