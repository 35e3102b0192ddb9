#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fbms/types.hpp"

namespace fbms {

class LevelSetDomain;

using Triangle = std::array<int, 3>;

/// Undirected edge with the (at most two, for valid meshes) incident faces.
struct Edge {
  int v0 = -1;  // v0 < v1
  int v1 = -1;
  std::array<int, 2> faces{-1, -1};
  int face_count = 0;

  bool is_boundary() const { return face_count == 1; }
};

/// Oriented triangle mesh with eagerly built adjacency. Connectivity is
/// shared between meshes created with with_positions(), so moving vertices
/// does not rebuild the tables. Immutable after construction.
///
/// Boundary loops are ordered by their lowest vertex index; each loop starts
/// at that vertex and follows the direction induced by the triangle
/// orientation (interior on the left, seen from the right-hand-rule normal).
class TriMesh {
public:
  TriMesh();
  TriMesh(std::vector<Vec3> positions, std::vector<Triangle> triangles);

  const std::vector<Vec3>& positions() const { return positions_; }
  const Vec3& position(int v) const { return positions_[static_cast<std::size_t>(v)]; }
  const std::vector<Triangle>& triangles() const;

  int num_vertices() const { return static_cast<int>(positions_.size()); }
  int num_triangles() const { return static_cast<int>(triangles().size()); }
  int num_edges() const { return static_cast<int>(edges().size()); }

  const std::vector<Edge>& edges() const;
  /// Index into edges() of the edge {i, j}, or -1.
  int edge_index(int i, int j) const;

  const std::vector<std::vector<int>>& boundary_loops() const;
  bool is_boundary_vertex(int v) const;
  const std::vector<int>& vertex_faces(int v) const;
  /// Sorted 1-ring vertex neighbours.
  const std::vector<int>& neighbors(int v) const;
  /// Vertices at graph distance 1..rings from v (v excluded), sorted.
  std::vector<int> ring(int v, int rings) const;

  int euler_characteristic() const { return num_vertices() - num_edges() + num_triangles(); }

  double face_area(int f) const;
  /// Unit right-hand-rule normal of face f (zero for degenerate faces).
  Vec3 face_normal(int f) const;
  double area() const;
  double mean_edge_length() const;
  double bounding_box_diagonal() const;

  /// Same connectivity, new vertex positions.
  TriMesh with_positions(std::vector<Vec3> positions) const;

private:
  struct Topology;

  std::vector<Vec3> positions_;
  std::shared_ptr<const Topology> topology_;
};

enum class ViolationKind {
  IndexOutOfRange,
  DegenerateTriangle,
  NonManifoldEdge,
  OrientationMismatch,
  NonManifoldBoundaryVertex,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  /// Offending simplex: {face} for triangle problems, {v0, v1} for edges,
  /// {v} for vertices.
  std::vector<int> simplex;
  std::string message;
};

/// Empty iff the mesh is a consistently oriented manifold with boundary and
/// no degenerate triangles (area <= 1e-14 * bbox_diagonal^2).
std::vector<Violation> validate(const TriMesh& mesh);

/// 1 -> 4 midpoint subdivision. With a domain, midpoints of boundary edges are
/// projected onto F = 1 (ProjectionDiverged propagates).
TriMesh refine(const TriMesh& mesh, const LevelSetDomain* domain = nullptr);

}  // namespace fbms
