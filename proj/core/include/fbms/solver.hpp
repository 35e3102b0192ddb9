#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fbms/domains.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

struct SolveConfig {
  /// Initial time step; defaults to 0.1 * (mean edge length)^2 of the input.
  std::optional<double> step;
  int max_iters = 10000;
  /// Iterations run even if the input already meets the tolerances.
  int min_iters = 0;
  /// Target for max interior |H| * (bounding-box diagonal).
  double tol_H = 1e-3;
  /// Target for max boundary |<N, Nbar>|.
  double tol_angle = 1e-2;
  /// Reject and halve steps that increase the area.
  bool damping = true;
  /// Weight of the tangential part of the cotan Laplacian added to interior
  /// moves, and of midpoint smoothing along boundary curves. Switched off for
  /// the last 10% of the iteration budget.
  double tangential_smoothing = 0.2;

  /// Throws InvalidArgument unless all tolerances and the step are positive.
  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  double final_area = 0.0;
  double residual_H = 0.0;
  double residual_angle = 0.0;
  bool converged = false;
  /// Area after every accepted iteration (index 0 is the input area).
  std::vector<double> energy_trace;
  /// Step in use when the run stopped.
  double final_step = 0.0;
  /// Largest vertex displacement in the last accepted iteration.
  double last_displacement = 0.0;
  int rejected_steps = 0;
};

struct Residuals {
  double residual_H = 0.0;
  double residual_angle = 0.0;
};

/// max interior |H| * bbox diagonal and max boundary |<N, Nbar>|, with H from
/// the cotan Laplacian and angle-weighted normals.
Residuals stationarity_residuals(const TriMesh& mesh, const LevelSetDomain& domain);

/// Damped area descent with boundary vertices sliding on F = 1.
///
/// Interior vertices move along the cotan Laplacian of the position (normal
/// part -2HN plus the weighted tangential part); boundary vertices move along
/// minus the area gradient projected onto the tangent plane of the domain
/// boundary and orthogonally to the boundary curve, and are then re-projected
/// onto F = 1. Only stable stationary points are reachable.
///
/// Throws InvalidArgument if a boundary vertex starts farther than 0.1 from
/// the domain boundary, MeshDegenerated if the minimum triangle quality falls
/// below 1e-3 of its initial value, and propagates ProjectionDiverged.
std::pair<TriMesh, SolveReport> solve_free_boundary(const TriMesh& initial, const LevelSetDomain& domain,
                                                    const SolveConfig& config = {});

/// Triangle quality 4 sqrt(3) area / sum of squared edge lengths (1 for
/// equilateral triangles).
double min_triangle_quality(const TriMesh& mesh);

}  // namespace fbms
