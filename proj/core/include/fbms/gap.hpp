#pragma once

#include <map>
#include <string>
#include <vector>

#include "fbms/discrete_ops.hpp"
#include "fbms/domains.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

enum class GapKind { EllipsoidAN, BallChern, Jacobi, BoundaryPrincipal, EllipsoidBoundaryConvexity };

std::string to_string(GapKind kind);

/// Per boundary loop summary of boundary_principal / boundary_convexity.
struct LoopRecord {
  int loop = -1;
  int vertices = 0;
  /// max over the collar of |A x^T - lambda x^T| / (|A| |x^T|).
  double dependence_defect = 0.0;
  double lambda_mean = 0.0;
  /// (max - min) / |mean| of lambda along the loop (max - min when the mean vanishes).
  double lambda_spread = 0.0;
  /// max | |lambda| - |grad g| | / max |lambda| (absolute when lambda vanishes).
  double gradient_mismatch = 0.0;
  double tau_mean = 0.0;
  double tau_spread = 0.0;
  /// max |<D_X omega, X> - g <A X, N x X>| over the collar with X = x^T and
  /// omega = N x x, divided by max |A| |x^T|^2 |x|.
  double lem1_error = 0.0;
  /// max |H - (tau_curve + lambda) / 2| / max(|lambda|, |tau_curve|).
  double mean_curvature_residual = 0.0;
  double min_x_tangent = 0.0;
  double min_geodesic_curvature = 0.0;
  /// Small dependence defect and small lambda spread.
  bool rotational_compatible = false;
};

struct GapReport {
  GapKind kind = GapKind::BallChern;
  /// Tested quantity per vertex (zero where it is not evaluated).
  std::vector<double> values;
  double max_value = 0.0;
  double bound = 0.0;
  /// max_value <= bound + 1e-9 (min_value >= bound - tolerance for the
  /// convexity check).
  bool hypothesis_satisfied = false;
  int witness = -1;
  std::vector<LoopRecord> per_loop;
  /// Secondary quantities (minimum Hessian eigenvalue, normalization, ...).
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> labels;
};

struct GapOptions {
  /// Gate on max interior |H| * diameter (ten times the solver default).
  double minimality_threshold = 1e-2;
  /// Gate on max |<N, Nbar>| at the boundary (ten times the solver default).
  double angle_threshold = 1e-1;
  /// Discretization slack of the Hessian eigenvalue bound.
  double lemma_slack = 5e-2;
  /// Relative slack of the convexity comparison.
  double convexity_slack = 5e-2;
  /// Defect and spread below which a loop counts as rotational-compatible.
  double principal_tolerance = 5e-2;
  double spread_tolerance = 2e-2;
};

/// Throws HypothesisUnmet unless the mesh is minimal and meets the domain
/// boundary orthogonally within the gate thresholds.
void require_free_boundary_minimal(const TriMesh& mesh, const LevelSetDomain& domain, const GapOptions& options);

/// g = <x, N> + (a^2/b^2 - 1) <x, E3> <N, E3> of the ellipsoid x1^2/a^2 + x2^2/a^2 + x3^2/b^2.
double ellipsoid_support(const EllipsoidSpec& spec, const Vec3& x, const Vec3& normal);

/// |A|^2 g^2 <= 2 per vertex, plus the minimum eigenvalue of
/// (a^2/2) Hess_S F = I + (a^2/b^2 - 1) T - g A on the tangent plane and its
/// lower bound min(1 - |A| g / sqrt 2, 1 + |A| g / sqrt 2).
GapReport gap_ellipsoid(const TriMesh& mesh, const DiscreteGeometry& geom, const EllipsoidSpec& spec,
                        const GapOptions& options = {});

/// |A|^2 <= 4 in the unit ball.
GapReport gap_ball(const TriMesh& mesh, const DiscreteGeometry& geom, const GapOptions& options = {});

/// |Lap g + |A|^2 g| with g = <x, N> at interior vertices, normalized by
/// max(max |g| |A|^2, 1); labels["g_sign"] is nonnegative, nonpositive, zero
/// or mixed. No gate: non-minimal input simply gives a large residual.
GapReport jacobi_residual(const TriMesh& mesh, const DiscreteGeometry& geom, double bound = 5e-2);

/// Principal-direction analysis of each boundary loop in the unit ball;
/// values are the dependence defects over the collar. Throws
/// TangentProjectionDegenerate.
GapReport boundary_principal(const TriMesh& mesh, const DiscreteGeometry& geom, const LevelSetDomain& domain,
                             const GapOptions& options = {});

/// Smallest principal curvature of the ellipsoid boundary (dense sample of
/// the closed-form meridian and parallel curvatures).
double ellipsoid_min_curvature(const EllipsoidSpec& spec, int samples = 4096);

/// Geodesic curvature -<P_T kappa, nu> of the boundary polyline in the
/// surface at a boundary vertex.
double geodesic_curvature(const DiscreteGeometry& geom, int v);

/// min k_g over the boundary against the ellipsoid's smallest principal curvature.
GapReport boundary_convexity(const TriMesh& mesh, const DiscreteGeometry& geom, const EllipsoidSpec& spec,
                             const GapOptions& options = {});

}  // namespace fbms
