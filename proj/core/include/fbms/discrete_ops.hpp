#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "fbms/domains.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

/// Sign convention used throughout: A X = D_X N restricted to the tangent
/// plane, H = tr(A) / 2 and Delta x = -2 H N. The unit sphere with outward
/// normal therefore has A = Id and H = 1.
struct DiscreteGeometry {
  /// Mixed Voronoi area per vertex; sums to the mesh area.
  std::vector<double> vertex_area;
  /// Angle-weighted vertex normals; at boundary vertices the normal of a
  /// one-sided cubic jet fit instead.
  std::vector<Vec3> normal;
  /// From the cotan Laplacian of x at interior vertices, tr(A)/2 at the boundary.
  std::vector<double> mean_curvature;
  /// Ambient 3x3 form of A: symmetric, vanishes on N.
  std::vector<Mat3> shape_operator;
  std::vector<double> norm_A_sq;
  std::vector<char> is_boundary;
  /// Outward conormal at boundary vertices, zero elsewhere.
  std::vector<Vec3> conormal;
  /// Half the length of the incident boundary edges, zero elsewhere.
  std::vector<double> line_element;
  /// Curvature vector of the boundary polyline, zero elsewhere.
  std::vector<Vec3> curve_curvature;
  /// Boundary loop index per vertex, -1 for interior vertices.
  std::vector<int> loop;
  /// Cotan weight (cot a + cot b) / 2 per edge, indexed like TriMesh::edges().
  std::vector<double> edge_weight;

  std::vector<double> principal_curvatures(int v) const;
};

struct GeometryOptions {
  /// Rings used by the quadric fit.
  int fit_rings = 2;
};

/// Throws InsufficientNeighborhood when a vertex has fewer than five
/// distinct vertices in its fitting neighbourhood.
DiscreteGeometry compute_geometry(const TriMesh& mesh, const GeometryOptions& options = {});

/// Per-edge cotan weights and mixed Voronoi vertex areas.
std::vector<double> cotan_weights(const TriMesh& mesh);
std::vector<double> mixed_vertex_areas(const TriMesh& mesh);

/// Symmetric stiffness matrix L with L_ij = -w_ij and zero row sums, so that
/// f^T L f = sum_e w_e (f_i - f_j)^2.
Eigen::SparseMatrix<double> cotan_matrix(const TriMesh& mesh);

/// Pointwise Laplace-Beltrami estimate sum_j w_ij (f_j - f_i) / M_i.
std::vector<double> laplacian_apply(const TriMesh& mesh, const std::vector<double>& values);
std::vector<double> laplacian_apply(const TriMesh& mesh, const DiscreteGeometry& geom,
                                    const std::vector<double>& values);
std::vector<Vec3> laplacian_apply(const TriMesh& mesh, const DiscreteGeometry& geom, const std::vector<Vec3>& values);

/// Lumped quadratures: sum of value * vertex_area, resp. value * line_element.
/// The boundary version reads one value per mesh vertex and ignores interior slots.
double integrate_surface(const TriMesh& mesh, const DiscreteGeometry& geom, const std::vector<double>& values);
double integrate_boundary(const TriMesh& mesh, const DiscreteGeometry& geom, const std::vector<double>& values);

struct BoundaryRecord {
  int vertex = -1;
  int loop = -1;
  Vec3 conormal = Vec3::Zero();
  /// grad F / |grad F| of the domain.
  Vec3 domain_normal = Vec3::Zero();
  /// <N, Nbar>; zero for a free-boundary surface.
  double normal_dot = 0.0;
  Vec3 x_tangent = Vec3::Zero();
  Vec3 A_x_tangent = Vec3::Zero();
  /// Rayleigh quotient <A x^T, x^T> / |x^T|^2.
  double lambda = 0.0;
  /// 2H - lambda.
  double tau = 0.0;
  /// -<N, kappa> from the boundary polyline; independent cross-check of tau.
  double tau_curve = 0.0;
  /// |x^T| < 1e-8; lambda and tau are then left at zero and 2H.
  bool degenerate = false;
};

/// One record per boundary vertex, in loop order. Throws InvalidArgument if a
/// boundary vertex is farther than 1e-6 from F = 1 (in |F - 1|) and
/// DegenerateGradient from the domain normal.
std::vector<BoundaryRecord> boundary_frame(const TriMesh& mesh, const DiscreteGeometry& geom,
                                           const LevelSetDomain& domain);

/// Like boundary_frame but throws TangentProjectionDegenerate on the first
/// degenerate record.
std::vector<BoundaryRecord> boundary_frame_strict(const TriMesh& mesh, const DiscreteGeometry& geom,
                                                  const LevelSetDomain& domain);

/// Columns: vertex, area, N, H, |A|^2, boundary flag, conormal, lambda, tau,
/// <N,Nbar>. Boundary columns are empty at interior vertices and when no frame
/// is given.
void write_geometry_csv(const TriMesh& mesh, const DiscreteGeometry& geom, const std::vector<BoundaryRecord>* frame,
                        std::ostream& out);

/// Vertex indices within graph distance `rings` of the boundary (boundary
/// included), sorted.
std::vector<int> boundary_collar(const TriMesh& mesh, int rings, int loop = -1);

/// Gradient of a per-vertex field at v by a least-squares linear fit over the
/// 1-ring, expressed as an ambient vector in the tangent plane of N.
Vec3 tangent_gradient(const TriMesh& mesh, const Vec3& normal, int v, const std::vector<double>& values);

/// Directional derivative D_X V of a per-vertex vector field at v, from a
/// quadratic fit of each component over the 2-ring in the tangent frame.
Vec3 directional_derivative(const TriMesh& mesh, const Vec3& normal, int v, const std::vector<Vec3>& field,
                            const Vec3& direction);

/// Projection onto the plane orthogonal to n.
inline Mat3 tangent_projector(const Vec3& n) { return Mat3::Identity() - n * n.transpose(); }

}  // namespace fbms
