#include "fbms/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <unordered_map>

#include "fbms/domains.hpp"
#include "fbms/error.hpp"

namespace fbms {

namespace {

std::uint64_t edge_key(int i, int j) {
  const auto lo = static_cast<std::uint32_t>(std::min(i, j));
  const auto hi = static_cast<std::uint32_t>(std::max(i, j));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

}  // namespace

struct TriMesh::Topology {
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, int> edge_lookup;
  std::vector<std::vector<int>> vertex_faces;
  std::vector<std::vector<int>> neighbors;
  std::vector<char> boundary;
  std::vector<std::vector<int>> loops;
  // Directed boundary successors, -1 if none; -2 marks a vertex with more than
  // one outgoing boundary half-edge.
  std::vector<int> boundary_next;
};

TriMesh::TriMesh() : topology_(std::make_shared<Topology>()) {}

TriMesh::TriMesh(std::vector<Vec3> positions, std::vector<Triangle> triangles)
    : positions_(std::move(positions)) {
  auto topo = std::make_shared<Topology>();
  topo->triangles = std::move(triangles);
  const int nv = num_vertices();
  topo->vertex_faces.resize(static_cast<std::size_t>(nv));
  topo->neighbors.resize(static_cast<std::size_t>(nv));
  topo->boundary.assign(static_cast<std::size_t>(nv), 0);
  topo->boundary_next.assign(static_cast<std::size_t>(nv), -1);

  const int nf = static_cast<int>(topo->triangles.size());
  for (int f = 0; f < nf; ++f) {
    const Triangle& t = topo->triangles[static_cast<std::size_t>(f)];
    bool in_range = true;
    for (int k = 0; k < 3; ++k) in_range = in_range && t[k] >= 0 && t[k] < nv;
    if (!in_range) continue;  // reported by validate()
    for (int k = 0; k < 3; ++k) {
      topo->vertex_faces[static_cast<std::size_t>(t[k])].push_back(f);
      const int i = t[k];
      const int j = t[(k + 1) % 3];
      if (i == j) continue;
      auto [it, inserted] = topo->edge_lookup.try_emplace(edge_key(i, j), static_cast<int>(topo->edges.size()));
      if (inserted) topo->edges.push_back(Edge{std::min(i, j), std::max(i, j)});
      Edge& e = topo->edges[static_cast<std::size_t>(it->second)];
      if (e.face_count < 2) e.faces[static_cast<std::size_t>(e.face_count)] = f;
      ++e.face_count;
    }
  }

  for (const Edge& e : topo->edges) {
    topo->neighbors[static_cast<std::size_t>(e.v0)].push_back(e.v1);
    topo->neighbors[static_cast<std::size_t>(e.v1)].push_back(e.v0);
    if (!e.is_boundary()) continue;
    topo->boundary[static_cast<std::size_t>(e.v0)] = 1;
    topo->boundary[static_cast<std::size_t>(e.v1)] = 1;
    // Direction of the boundary half-edge as it appears in its face.
    const Triangle& t = topo->triangles[static_cast<std::size_t>(e.faces[0])];
    int from = e.v0, to = e.v1;
    for (int k = 0; k < 3; ++k) {
      if (t[k] == e.v1 && t[(k + 1) % 3] == e.v0) std::swap(from, to);
    }
    int& next = topo->boundary_next[static_cast<std::size_t>(from)];
    next = next == -1 ? to : -2;
  }
  for (auto& nb : topo->neighbors) std::sort(nb.begin(), nb.end());

  std::vector<char> visited(static_cast<std::size_t>(nv), 0);
  for (int v = 0; v < nv; ++v) {
    if (!topo->boundary[static_cast<std::size_t>(v)] || visited[static_cast<std::size_t>(v)]) continue;
    std::vector<int> loop;
    int cur = v;
    while (cur >= 0 && !visited[static_cast<std::size_t>(cur)]) {
      visited[static_cast<std::size_t>(cur)] = 1;
      loop.push_back(cur);
      cur = topo->boundary_next[static_cast<std::size_t>(cur)];
    }
    topo->loops.push_back(std::move(loop));
  }
  topology_ = std::move(topo);
}

const std::vector<Triangle>& TriMesh::triangles() const { return topology_->triangles; }
const std::vector<Edge>& TriMesh::edges() const { return topology_->edges; }

int TriMesh::edge_index(int i, int j) const {
  const auto it = topology_->edge_lookup.find(edge_key(i, j));
  return it == topology_->edge_lookup.end() ? -1 : it->second;
}

const std::vector<std::vector<int>>& TriMesh::boundary_loops() const { return topology_->loops; }

bool TriMesh::is_boundary_vertex(int v) const { return topology_->boundary[static_cast<std::size_t>(v)] != 0; }

const std::vector<int>& TriMesh::vertex_faces(int v) const {
  return topology_->vertex_faces[static_cast<std::size_t>(v)];
}

const std::vector<int>& TriMesh::neighbors(int v) const { return topology_->neighbors[static_cast<std::size_t>(v)]; }

std::vector<int> TriMesh::ring(int v, int rings) const {
  std::vector<int> frontier{v};
  std::vector<int> seen{v};
  for (int r = 0; r < rings; ++r) {
    std::vector<int> next;
    for (int u : frontier) {
      for (int w : neighbors(u)) {
        if (std::find(seen.begin(), seen.end(), w) == seen.end()) {
          seen.push_back(w);
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  seen.erase(seen.begin());
  std::sort(seen.begin(), seen.end());
  return seen;
}

double TriMesh::face_area(int f) const {
  const Triangle& t = triangles()[static_cast<std::size_t>(f)];
  return 0.5 * (position(t[1]) - position(t[0])).cross(position(t[2]) - position(t[0])).norm();
}

Vec3 TriMesh::face_normal(int f) const {
  const Triangle& t = triangles()[static_cast<std::size_t>(f)];
  const Vec3 n = (position(t[1]) - position(t[0])).cross(position(t[2]) - position(t[0]));
  const double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

double TriMesh::area() const {
  double total = 0.0;
  for (int f = 0; f < num_triangles(); ++f) total += face_area(f);
  return total;
}

double TriMesh::mean_edge_length() const {
  if (edges().empty()) return 0.0;
  double total = 0.0;
  for (const Edge& e : edges()) total += (position(e.v0) - position(e.v1)).norm();
  return total / static_cast<double>(edges().size());
}

double TriMesh::bounding_box_diagonal() const {
  if (positions_.empty()) return 0.0;
  Vec3 lo = positions_.front(), hi = positions_.front();
  for (const Vec3& p : positions_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

TriMesh TriMesh::with_positions(std::vector<Vec3> positions) const {
  if (positions.size() != positions_.size()) {
    fail(ErrorKind::InvalidArgument, "with_positions: vertex count mismatch");
  }
  TriMesh out;
  out.positions_ = std::move(positions);
  out.topology_ = topology_;
  return out;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::IndexOutOfRange: return "IndexOutOfRange";
    case ViolationKind::DegenerateTriangle: return "DegenerateTriangle";
    case ViolationKind::NonManifoldEdge: return "NonManifoldEdge";
    case ViolationKind::OrientationMismatch: return "OrientationMismatch";
    case ViolationKind::NonManifoldBoundaryVertex: return "NonManifoldBoundaryVertex";
  }
  return "Unknown";
}

std::vector<Violation> validate(const TriMesh& mesh) {
  std::vector<Violation> out;
  const int nv = mesh.num_vertices();
  const double diag = mesh.bounding_box_diagonal();
  const double min_area = 1e-14 * diag * diag;

  for (int f = 0; f < mesh.num_triangles(); ++f) {
    const Triangle& t = mesh.triangles()[static_cast<std::size_t>(f)];
    bool in_range = true;
    for (int k = 0; k < 3; ++k) in_range = in_range && t[k] >= 0 && t[k] < nv;
    if (!in_range) {
      out.push_back({ViolationKind::IndexOutOfRange, {f}, "triangle " + std::to_string(f) + " references a missing vertex"});
      continue;
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2] || !(mesh.face_area(f) > min_area)) {
      out.push_back({ViolationKind::DegenerateTriangle, {f}, "triangle " + std::to_string(f) + " has (near) zero area"});
    }
  }

  for (const Edge& e : mesh.edges()) {
    const std::string name = "edge (" + std::to_string(e.v0) + ", " + std::to_string(e.v1) + ")";
    if (e.face_count > 2) {
      out.push_back({ViolationKind::NonManifoldEdge, {e.v0, e.v1}, name + " borders " + std::to_string(e.face_count) + " triangles"});
      continue;
    }
    if (e.face_count != 2) continue;
    // Consistent orientation: the two faces traverse the edge in opposite directions.
    auto forward = [&](int f) {
      const Triangle& t = mesh.triangles()[static_cast<std::size_t>(f)];
      for (int k = 0; k < 3; ++k) {
        if (t[k] == e.v0 && t[(k + 1) % 3] == e.v1) return true;
      }
      return false;
    };
    if (forward(e.faces[0]) == forward(e.faces[1])) {
      out.push_back({ViolationKind::OrientationMismatch, {e.v0, e.v1}, name + " is traversed in the same direction by both faces"});
    }
  }

  // Each boundary vertex needs exactly one incoming and one outgoing boundary
  // half-edge for the loops to partition the boundary edges.
  std::vector<int> boundary_degree(static_cast<std::size_t>(nv), 0);
  for (const Edge& e : mesh.edges()) {
    if (!e.is_boundary()) continue;
    ++boundary_degree[static_cast<std::size_t>(e.v0)];
    ++boundary_degree[static_cast<std::size_t>(e.v1)];
  }
  for (int v = 0; v < nv; ++v) {
    const int d = boundary_degree[static_cast<std::size_t>(v)];
    if (d != 0 && d != 2) {
      out.push_back({ViolationKind::NonManifoldBoundaryVertex, {v},
                     "vertex " + std::to_string(v) + " has " + std::to_string(d) + " boundary edges"});
    }
  }
  return out;
}

TriMesh refine(const TriMesh& mesh, const LevelSetDomain* domain) {
  std::vector<Vec3> positions = mesh.positions();
  std::vector<int> midpoint(mesh.edges().size(), -1);

  auto mid = [&](int i, int j) {
    const int e = mesh.edge_index(i, j);
    int& m = midpoint[static_cast<std::size_t>(e)];
    if (m >= 0) return m;
    Vec3 p = 0.5 * (mesh.position(i) + mesh.position(j));
    if (domain && mesh.edges()[static_cast<std::size_t>(e)].is_boundary()) p = project_to_boundary(*domain, p);
    m = static_cast<int>(positions.size());
    positions.push_back(p);
    return m;
  };

  std::vector<Triangle> triangles;
  triangles.reserve(mesh.triangles().size() * 4);
  for (const Triangle& t : mesh.triangles()) {
    const int ab = mid(t[0], t[1]);
    const int bc = mid(t[1], t[2]);
    const int ca = mid(t[2], t[0]);
    triangles.push_back({t[0], ab, ca});
    triangles.push_back({ab, t[1], bc});
    triangles.push_back({ca, bc, t[2]});
    triangles.push_back({ab, bc, ca});
  }
  return TriMesh(std::move(positions), std::move(triangles));
}

}  // namespace fbms
