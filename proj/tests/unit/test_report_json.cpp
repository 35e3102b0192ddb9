#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>
#include <string>

#include "fbms/report_json.hpp"

using namespace fbms;
using nlohmann::json;

namespace {

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(ReportJson, SolveReportKeys) {
  SolveReport r;
  r.iterations = 3;
  r.energy_trace = {3.0, 2.0, 1.5, 1.4};
  r.converged = true;
  const json j = to_json(r);
  for (const char* key : {"iterations", "final_area", "residual_H", "residual_angle", "converged", "final_step",
                          "last_displacement", "rejected_steps", "energy_trace"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["energy_trace"].size(), 4u);
  EXPECT_FALSE(to_json(r, false).contains("energy_trace"));
}

TEST(ReportJson, IdentityReportAndCsv) {
  IdentityReport r;
  r.kind = IdentityKind::fundamental(TestFunction::NormSq);
  r.levels = {{100, 0.1, 1.0, 1.01, 0.01, 0.0099, 2.0}, {400, 0.05, 1.0, 1.0025, 0.0025, 0.0025, 2.0}};
  json j = to_json(r);
  EXPECT_EQ(j["identity"], "fundamental(|x|^2)");
  EXPECT_TRUE(j["estimated_order"].is_null());
  EXPECT_EQ(j["levels"].size(), 2u);
  EXPECT_EQ(j["levels"][1]["triangles"], 400);
  r.estimated_order = 2.0;
  EXPECT_DOUBLE_EQ(to_json(r)["estimated_order"].get<double>(), 2.0);

  std::ostringstream csv;
  write_identity_csv(r, csv);
  EXPECT_EQ(count_lines(csv.str()), 3);
  EXPECT_EQ(csv.str().rfind("level,triangles,h,lhs,rhs,residual,relative_residual\n", 0), 0u);
}

TEST(ReportJson, GapReportAndCsv) {
  GapReport r;
  r.kind = GapKind::BallChern;
  r.values = {0.0, 1.0, 9.4};
  r.max_value = 9.4;
  r.bound = 4.0;
  r.witness = 2;
  r.per_loop.push_back({});
  r.metrics["min_hessian_eigenvalue"] = 1.0;
  r.labels["g_sign"] = "mixed";
  const json j = to_json(r);
  EXPECT_EQ(j["kind"], "ball-gap");
  EXPECT_EQ(j["witness_vertex"], 2);
  EXPECT_FALSE(j["hypothesis_satisfied"].get<bool>());
  EXPECT_EQ(j["per_loop"].size(), 1u);
  EXPECT_TRUE(j["per_loop"][0].contains("lambda_spread"));
  EXPECT_EQ(j["labels"]["g_sign"], "mixed");
  EXPECT_FALSE(j.contains("values"));
  EXPECT_EQ(to_json(r, true)["values"].size(), 3u);

  std::ostringstream csv;
  write_gap_csv(r, csv);
  EXPECT_EQ(count_lines(csv.str()), 4);
}

TEST(ReportJson, GapKindNames) {
  EXPECT_EQ(to_string(GapKind::EllipsoidAN), "ellipsoid-gap");
  EXPECT_EQ(to_string(GapKind::Jacobi), "jacobi");
  EXPECT_EQ(to_string(GapKind::BoundaryPrincipal), "boundary-principal");
  EXPECT_EQ(to_string(GapKind::EllipsoidBoundaryConvexity), "boundary-convexity");
}

TEST(ReportJson, SignatureAndManifest) {
  SignatureReport s;
  s.samples = 10;
  s.directions.push_back({Vec3::UnitZ(), SignPattern::Positive, 0.5, 2.0, "no free-boundary minimal hypersurface"});
  s.conclusion = s.directions[0].conclusion;
  const json js = to_json(s);
  EXPECT_EQ(js["directions"][0]["pattern"], "positive");
  EXPECT_EQ(js["directions"][0]["direction"], json::array({0.0, 0.0, 1.0}));

  RunManifest m;
  m.command = "solve";
  m.inputs = {"disk.obj"};
  m.exit_code = 3;
  const json jm = to_json(m);
  EXPECT_EQ(jm["tool_version"], version());
  EXPECT_FALSE(version().empty());
  EXPECT_EQ(jm["exit_code"], 3);
  EXPECT_EQ(jm["inputs"][0], "disk.obj");
}
