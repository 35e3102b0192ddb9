#include "fbms/gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "fbms/error.hpp"
#include "fbms/solver.hpp"

namespace fbms {

namespace {

constexpr double kReportTolerance = 1e-9;
constexpr double kTiny = 1e-12;

void tangent_frame(const Vec3& n, Vec3& e1, Vec3& e2) {
  const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  e1 = (seed - seed.dot(n) * n).normalized();
  e2 = n.cross(e1);
}

Eigen::Matrix2d restrict_to(const Mat3& m, const Vec3& e1, const Vec3& e2) {
  Eigen::Matrix2d r;
  r << e1.dot(m * e1), e1.dot(m * e2), e2.dot(m * e1), e2.dot(m * e2);
  return 0.5 * (r + r.transpose());
}

void set_max(GapReport& report) {
  report.max_value = 0.0;
  report.witness = -1;
  for (std::size_t v = 0; v < report.values.size(); ++v) {
    if (report.witness < 0 || report.values[v] > report.max_value) {
      report.max_value = report.values[v];
      report.witness = static_cast<int>(v);
    }
  }
  report.hypothesis_satisfied = report.max_value <= report.bound + kReportTolerance;
}

double spread(double lo, double hi, double mean) {
  return std::abs(mean) > kTiny ? (hi - lo) / std::abs(mean) : hi - lo;
}

}  // namespace

std::string to_string(GapKind kind) {
  switch (kind) {
    case GapKind::EllipsoidAN: return "ellipsoid-gap";
    case GapKind::BallChern: return "ball-gap";
    case GapKind::Jacobi: return "jacobi";
    case GapKind::BoundaryPrincipal: return "boundary-principal";
    case GapKind::EllipsoidBoundaryConvexity: return "boundary-convexity";
  }
  return "?";
}

void require_free_boundary_minimal(const TriMesh& mesh, const LevelSetDomain& domain, const GapOptions& options) {
  const Residuals r = stationarity_residuals(mesh, domain);
  if (!(r.residual_H <= options.minimality_threshold)) {
    fail(ErrorKind::HypothesisUnmet, "surface is not minimal: max |H| * diameter = " + std::to_string(r.residual_H) +
                                         " exceeds " + std::to_string(options.minimality_threshold));
  }
  if (!(r.residual_angle <= options.angle_threshold)) {
    fail(ErrorKind::HypothesisUnmet, "surface is not free boundary: max |<N, Nbar>| = " +
                                         std::to_string(r.residual_angle) + " exceeds " +
                                         std::to_string(options.angle_threshold));
  }
}

double ellipsoid_support(const EllipsoidSpec& spec, const Vec3& x, const Vec3& normal) {
  const double k = spec.a * spec.a / (spec.b * spec.b) - 1.0;
  return x.dot(normal) + k * x.z() * normal.z();
}

GapReport gap_ellipsoid(const TriMesh& mesh, const DiscreteGeometry& geom, const EllipsoidSpec& spec,
                        const GapOptions& options) {
  spec.validate();
  const LevelSetDomain domain = LevelSetDomain::ellipsoid(spec);
  require_free_boundary_minimal(mesh, domain, options);

  const double k = spec.a * spec.a / (spec.b * spec.b) - 1.0;
  const Mat3 hess_f = Vec3(2.0 / (spec.a * spec.a), 2.0 / (spec.a * spec.a), 2.0 / (spec.b * spec.b)).asDiagonal();

  GapReport report;
  report.kind = GapKind::EllipsoidAN;
  report.bound = 2.0;
  const auto nv = static_cast<std::size_t>(mesh.num_vertices());
  report.values.assign(nv, 0.0);
  double min_eig = std::numeric_limits<double>::infinity();
  double worst_margin = -std::numeric_limits<double>::infinity();
  double closed_form_mismatch = 0.0;
  int violations = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    const Vec3& x = mesh.position(static_cast<int>(v));
    const Vec3& n = geom.normal[v];
    const Mat3& a_op = geom.shape_operator[v];
    const double g = ellipsoid_support(spec, x, n);
    report.values[v] = geom.norm_A_sq[v] * g * g;

    Vec3 e1, e2;
    tangent_frame(n, e1, e2);
    const Vec3 e3_t = tangent_projector(n) * Vec3::UnitZ();
    const Mat3 closed = tangent_projector(n) + k * e3_t * e3_t.transpose() - g * a_op;
    const Eigen::Matrix2d m = restrict_to(closed, e1, e2);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()(0);

    // Same operator from the ambient Hessian: P Hess F P - <grad F, N> A.
    const Mat3 p = tangent_projector(n);
    const Vec3 grad = domain.gradient(x);
    const Mat3 direct = 0.5 * spec.a * spec.a * (p * hess_f * p - grad.dot(n) * a_op);
    closed_form_mismatch = std::max(closed_form_mismatch, (restrict_to(direct, e1, e2) - m).cwiseAbs().maxCoeff());

    const double a_norm = std::sqrt(geom.norm_A_sq[v]);
    const double lemma = std::min(1.0 - a_norm * g / std::sqrt(2.0), 1.0 + a_norm * g / std::sqrt(2.0));
    min_eig = std::min(min_eig, lo);
    worst_margin = std::max(worst_margin, lemma - lo);
    if (lo < lemma - options.lemma_slack) ++violations;
  }
  set_max(report);
  report.metrics["min_hessian_eigenvalue"] = nv ? min_eig : 0.0;
  report.metrics["max_lemma_deficit"] = nv ? worst_margin : 0.0;
  report.metrics["lemma_violations"] = violations;
  report.metrics["lemma_slack"] = options.lemma_slack;
  report.metrics["hessian_form_mismatch"] = closed_form_mismatch;
  report.labels["lemma_bound"] = violations == 0 ? "holds" : "violated";
  return report;
}

GapReport gap_ball(const TriMesh& mesh, const DiscreteGeometry& geom, const GapOptions& options) {
  require_free_boundary_minimal(mesh, LevelSetDomain::ball(), options);
  GapReport report;
  report.kind = GapKind::BallChern;
  report.bound = 4.0;
  report.values = geom.norm_A_sq;
  set_max(report);
  return report;
}

GapReport jacobi_residual(const TriMesh& mesh, const DiscreteGeometry& geom, double bound) {
  const auto nv = static_cast<std::size_t>(mesh.num_vertices());
  std::vector<double> g(nv);
  for (std::size_t v = 0; v < nv; ++v) g[v] = mesh.position(static_cast<int>(v)).dot(geom.normal[v]);
  const std::vector<double> lap = laplacian_apply(mesh, geom, g);

  double scale = 0.0, g_min = 0.0, g_max = 0.0;
  for (std::size_t v = 0; v < nv; ++v) {
    scale = std::max(scale, std::abs(g[v]) * geom.norm_A_sq[v]);
    g_min = std::min(g_min, g[v]);
    g_max = std::max(g_max, g[v]);
  }
  const double norm = std::max(scale, 1.0);

  GapReport report;
  report.kind = GapKind::Jacobi;
  report.bound = bound;
  report.values.assign(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (geom.is_boundary[v]) continue;
    report.values[v] = std::abs(lap[v] + geom.norm_A_sq[v] * g[v]) / norm;
  }
  set_max(report);
  report.metrics["normalization"] = norm;
  report.metrics["g_min"] = g_min;
  report.metrics["g_max"] = g_max;
  const double tol = 1e-12 * std::max(1.0, mesh.bounding_box_diagonal());
  report.labels["g_sign"] = g_min >= -tol ? (g_max <= tol ? "zero" : "nonnegative") : (g_max <= tol ? "nonpositive" : "mixed");
  return report;
}

GapReport boundary_principal(const TriMesh& mesh, const DiscreteGeometry& geom, const LevelSetDomain& domain,
                             const GapOptions& options) {
  const std::vector<BoundaryRecord> frame = boundary_frame_strict(mesh, geom, domain);
  const auto nv = static_cast<std::size_t>(mesh.num_vertices());

  std::vector<Vec3> omega(nv);
  std::vector<double> g(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const Vec3& x = mesh.position(static_cast<int>(v));
    omega[v] = geom.normal[v].cross(x);
    g[v] = x.dot(geom.normal[v]);
  }

  GapReport report;
  report.kind = GapKind::BoundaryPrincipal;
  report.bound = options.principal_tolerance;
  report.values.assign(nv, 0.0);

  const int loops = static_cast<int>(mesh.boundary_loops().size());
  for (int l = 0; l < loops; ++l) {
    LoopRecord rec;
    rec.loop = l;
    rec.min_x_tangent = std::numeric_limits<double>::infinity();

    double lem1_scale = 0.0, lem1_err = 0.0;
    for (int v : boundary_collar(mesh, 2, l)) {
      const auto vi = static_cast<std::size_t>(v);
      const Vec3& x = mesh.position(v);
      const Vec3& n = geom.normal[vi];
      const Mat3& a_op = geom.shape_operator[vi];
      const Vec3 xt = tangent_projector(n) * x;
      const double len = xt.norm();
      rec.min_x_tangent = std::min(rec.min_x_tangent, len);
      if (len < 1e-8) continue;
      const Vec3 axt = a_op * xt;
      const double lambda = axt.dot(xt) / (len * len);
      const double denom = std::sqrt(geom.norm_A_sq[vi]) * len;
      report.values[vi] = denom > kTiny ? (axt - lambda * xt).norm() / denom : 0.0;
      rec.dependence_defect = std::max(rec.dependence_defect, report.values[vi]);

      const double lhs = directional_derivative(mesh, n, v, omega, xt).dot(xt);
      const double rhs = g[vi] * axt.dot(n.cross(xt));
      lem1_err = std::max(lem1_err, std::abs(lhs - rhs));
      lem1_scale = std::max(lem1_scale, std::sqrt(geom.norm_A_sq[vi]) * len * len * x.norm());
    }
    rec.lem1_error = lem1_scale > kTiny ? lem1_err / lem1_scale : lem1_err;

    double lam_lo = std::numeric_limits<double>::infinity(), lam_hi = -lam_lo;
    double tau_lo = lam_lo, tau_hi = -lam_lo, lam_abs_max = 0.0, grad_err = 0.0;
    double tau_sum = 0.0, lam_sum = 0.0;
    for (const BoundaryRecord& r : frame) {
      if (r.loop != l) continue;
      ++rec.vertices;
      lam_lo = std::min(lam_lo, r.lambda);
      lam_hi = std::max(lam_hi, r.lambda);
      tau_lo = std::min(tau_lo, r.tau);
      tau_hi = std::max(tau_hi, r.tau);
      lam_sum += r.lambda;
      tau_sum += r.tau;
      lam_abs_max = std::max(lam_abs_max, std::abs(r.lambda));
      const auto vi = static_cast<std::size_t>(r.vertex);
      const double grad_g = tangent_gradient(mesh, geom.normal[vi], r.vertex, g).norm();
      grad_err = std::max(grad_err, std::abs(std::abs(r.lambda) - grad_g));

      const double h = geom.mean_curvature[vi];
      const double scale = std::max(std::abs(r.lambda), std::abs(r.tau_curve));
      const double dh = std::abs(h - 0.5 * (r.tau_curve + r.lambda));
      rec.mean_curvature_residual = std::max(rec.mean_curvature_residual, scale > kTiny ? dh / scale : dh);
    }
    if (rec.vertices > 0) {
      rec.lambda_mean = lam_sum / rec.vertices;
      rec.tau_mean = tau_sum / rec.vertices;
      rec.lambda_spread = spread(lam_lo, lam_hi, rec.lambda_mean);
      rec.tau_spread = spread(tau_lo, tau_hi, rec.tau_mean);
    }
    rec.gradient_mismatch = lam_abs_max > kTiny ? grad_err / lam_abs_max : grad_err;
    if (!std::isfinite(rec.min_x_tangent)) rec.min_x_tangent = 0.0;
    rec.rotational_compatible =
        rec.dependence_defect <= options.principal_tolerance && rec.lambda_spread <= options.spread_tolerance;
    report.per_loop.push_back(rec);
  }
  set_max(report);
  report.hypothesis_satisfied = !report.per_loop.empty() &&
                                std::all_of(report.per_loop.begin(), report.per_loop.end(),
                                            [](const LoopRecord& r) { return r.rotational_compatible; });
  report.labels["conclusion"] =
      report.hypothesis_satisfied ? "rotationally-invariant-compatible" : "not rotationally-invariant-compatible";
  return report;
}

double ellipsoid_min_curvature(const EllipsoidSpec& spec, int samples) {
  spec.validate();
  const double a = spec.a, b = spec.b;
  double c = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    // Meridian point (a cos t, b sin t), t in [0, pi/2] by symmetry.
    const double t = 0.5 * std::numbers::pi * i / samples;
    const double q = a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t);
    c = std::min({c, a * b / std::pow(q, 1.5), b / (a * std::sqrt(q))});
  }
  return c;
}

double geodesic_curvature(const DiscreteGeometry& geom, int v) {
  const auto vi = static_cast<std::size_t>(v);
  return -(tangent_projector(geom.normal[vi]) * geom.curve_curvature[vi]).dot(geom.conormal[vi]);
}

GapReport boundary_convexity(const TriMesh& mesh, const DiscreteGeometry& geom, const EllipsoidSpec& spec,
                             const GapOptions& options) {
  const double c = ellipsoid_min_curvature(spec);
  GapReport report;
  report.kind = GapKind::EllipsoidBoundaryConvexity;
  report.bound = c;
  report.values.assign(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  double min_kg = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (!geom.is_boundary[static_cast<std::size_t>(v)]) continue;
    const double kg = geodesic_curvature(geom, v);
    report.values[static_cast<std::size_t>(v)] = kg;
    if (kg < min_kg) {
      min_kg = kg;
      report.witness = v;
    }
  }
  if (report.witness < 0) fail(ErrorKind::InvalidArgument, "boundary convexity needs a surface with boundary");
  report.max_value = min_kg;
  report.hypothesis_satisfied = min_kg >= c * (1.0 - options.convexity_slack) - kReportTolerance;
  report.metrics["min_geodesic_curvature"] = min_kg;
  report.metrics["min_principal_curvature"] = c;
  for (std::size_t l = 0; l < mesh.boundary_loops().size(); ++l) {
    LoopRecord rec;
    rec.loop = static_cast<int>(l);
    rec.min_geodesic_curvature = std::numeric_limits<double>::infinity();
    for (int v : mesh.boundary_loops()[l]) {
      ++rec.vertices;
      rec.min_geodesic_curvature = std::min(rec.min_geodesic_curvature, report.values[static_cast<std::size_t>(v)]);
    }
    report.per_loop.push_back(rec);
  }
  return report;
}

}  // namespace fbms
