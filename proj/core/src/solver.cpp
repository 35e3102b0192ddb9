#include "fbms/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbms/discrete_ops.hpp"
#include "fbms/error.hpp"

namespace fbms {

namespace {

constexpr double kAreaSlack = 1e-12;
constexpr int kMaxHalvings = 60;

std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
  std::vector<Vec3> normals(static_cast<std::size_t>(mesh.num_vertices()), Vec3::Zero());
  for (const Triangle& t : mesh.triangles()) {
    const Vec3 fn = (mesh.position(t[1]) - mesh.position(t[0])).cross(mesh.position(t[2]) - mesh.position(t[0]));
    if (fn.norm() == 0.0) continue;
    const Vec3 unit = fn.normalized();
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.position(t[static_cast<std::size_t>(k)]);
      const Vec3 a = mesh.position(t[static_cast<std::size_t>((k + 1) % 3)]) - p;
      const Vec3 b = mesh.position(t[static_cast<std::size_t>((k + 2) % 3)]) - p;
      normals[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])] += std::atan2(a.cross(b).norm(), a.dot(b)) * unit;
    }
  }
  for (auto& n : normals) {
    if (n.norm() > 0.0) n.normalize();
  }
  return normals;
}

/// Cotan Laplacian of the position with the given lumped areas.
std::vector<Vec3> position_laplacian(const TriMesh& mesh, const std::vector<double>& areas) {
  const std::vector<double> w = cotan_weights(mesh);
  std::vector<Vec3> out(static_cast<std::size_t>(mesh.num_vertices()), Vec3::Zero());
  for (std::size_t e = 0; e < w.size(); ++e) {
    const Edge& edge = mesh.edges()[e];
    const Vec3 d = mesh.position(edge.v1) - mesh.position(edge.v0);
    out[static_cast<std::size_t>(edge.v0)] += w[e] * d;
    out[static_cast<std::size_t>(edge.v1)] -= w[e] * d;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (areas[i] > 0.0) out[i] /= areas[i];
  }
  return out;
}

struct LoopNeighbours {
  std::vector<int> prev, next;
};

LoopNeighbours loop_neighbours(const TriMesh& mesh) {
  LoopNeighbours ln{std::vector<int>(static_cast<std::size_t>(mesh.num_vertices()), -1),
                    std::vector<int>(static_cast<std::size_t>(mesh.num_vertices()), -1)};
  for (const auto& loop : mesh.boundary_loops()) {
    const std::size_t k = loop.size();
    for (std::size_t i = 0; i < k; ++i) {
      ln.prev[static_cast<std::size_t>(loop[i])] = loop[(i + k - 1) % k];
      ln.next[static_cast<std::size_t>(loop[i])] = loop[(i + 1) % k];
    }
  }
  return ln;
}

/// Unit direction in T(dOmega) at x orthogonal to n_bar along the boundary
/// polyline through prev and next.
Vec3 boundary_curve_tangent(const Vec3& n_bar, const Vec3& prev, const Vec3& next) {
  const Vec3 t = tangent_projector(n_bar) * (next - prev);
  const double len = t.norm();
  return len > 0.0 ? Vec3(t / len) : Vec3::Zero();
}

}  // namespace

void SolveConfig::validate() const {
  if (step && !(*step > 0.0)) fail(ErrorKind::InvalidArgument, "solver step must be positive");
  if (!(tol_H > 0.0) || !(tol_angle > 0.0)) fail(ErrorKind::InvalidArgument, "solver tolerances must be positive");
  if (max_iters < 0 || min_iters < 0) fail(ErrorKind::InvalidArgument, "iteration counts must be non-negative");
  if (!(tangential_smoothing >= 0.0)) fail(ErrorKind::InvalidArgument, "tangential_smoothing must be non-negative");
}

double min_triangle_quality(const TriMesh& mesh) {
  double q = std::numeric_limits<double>::infinity();
  for (int f = 0; f < mesh.num_triangles(); ++f) {
    const Triangle& t = mesh.triangles()[static_cast<std::size_t>(f)];
    const double denom = (mesh.position(t[1]) - mesh.position(t[0])).squaredNorm() +
                         (mesh.position(t[2]) - mesh.position(t[1])).squaredNorm() +
                         (mesh.position(t[0]) - mesh.position(t[2])).squaredNorm();
    q = std::min(q, denom > 0.0 ? 4.0 * std::sqrt(3.0) * mesh.face_area(f) / denom : 0.0);
  }
  return q;
}

Residuals stationarity_residuals(const TriMesh& mesh, const LevelSetDomain& domain) {
  const std::vector<Vec3> normals = vertex_normals(mesh);
  const std::vector<Vec3> lap = position_laplacian(mesh, mixed_vertex_areas(mesh));
  const double diameter = mesh.bounding_box_diagonal();
  Residuals r;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto vi = static_cast<std::size_t>(v);
    if (mesh.is_boundary_vertex(v)) {
      r.residual_angle = std::max(r.residual_angle, std::abs(normals[vi].dot(domain.outward_normal(mesh.position(v)))));
    } else {
      r.residual_H = std::max(r.residual_H, std::abs(0.5 * lap[vi].dot(normals[vi])) * diameter);
    }
  }
  return r;
}

std::pair<TriMesh, SolveReport> solve_free_boundary(const TriMesh& initial, const LevelSetDomain& domain,
                                                    const SolveConfig& config) {
  config.validate();
  const auto nv = static_cast<std::size_t>(initial.num_vertices());

  std::vector<Vec3> start = initial.positions();
  for (int v = 0; v < initial.num_vertices(); ++v) {
    if (!initial.is_boundary_vertex(v)) continue;
    const FieldSample s = domain.evaluate(start[static_cast<std::size_t>(v)]);
    const double gn = s.grad.norm();
    const double distance = gn > 0.0 ? std::abs(s.value - 1.0) / gn : std::numeric_limits<double>::infinity();
    if (!(distance <= 0.1)) {
      fail(ErrorKind::InvalidArgument, "boundary vertex " + std::to_string(v) + " starts " + std::to_string(distance) +
                                           " away from the domain boundary (limit 0.1)");
    }
    start[static_cast<std::size_t>(v)] = project_to_boundary(domain, start[static_cast<std::size_t>(v)]);
  }
  TriMesh mesh = initial.with_positions(std::move(start));

  const double initial_step = config.step.value_or(0.1 * std::pow(mesh.mean_edge_length(), 2));
  const double quality_floor = 1e-3 * min_triangle_quality(mesh);
  const LoopNeighbours ln = loop_neighbours(mesh);
  const int smoothing_cutoff = config.max_iters - config.max_iters / 10;

  SolveReport report;
  double step = initial_step;
  double area = mesh.area();
  report.energy_trace.push_back(area);
  int accepted_streak = 0;

  auto check = [&](const TriMesh& m) {
    const Residuals r = stationarity_residuals(m, domain);
    report.residual_H = r.residual_H;
    report.residual_angle = r.residual_angle;
    return r.residual_H <= config.tol_H && r.residual_angle <= config.tol_angle;
  };

  report.converged = check(mesh);
  while ((!report.converged || report.iterations < config.min_iters) && report.iterations < config.max_iters) {
    const double smoothing = report.iterations < smoothing_cutoff ? config.tangential_smoothing : 0.0;
    const std::vector<double> areas = mixed_vertex_areas(mesh);
    const std::vector<Vec3> normals = vertex_normals(mesh);
    const std::vector<Vec3> lap = position_laplacian(mesh, areas);

    // Velocity per unit step. -M_i * lap_i is the area gradient at vertex i.
    std::vector<Vec3> velocity(nv, Vec3::Zero());
    for (std::size_t v = 0; v < nv; ++v) {
      const Vec3& n = normals[v];
      if (!mesh.is_boundary_vertex(static_cast<int>(v))) {
        const Vec3 normal_part = lap[v].dot(n) * n;
        velocity[v] = normal_part + smoothing * (lap[v] - normal_part);
        continue;
      }
      const Vec3& x = mesh.position(static_cast<int>(v));
      const Vec3 n_bar = domain.outward_normal(x);
      const Vec3 t = boundary_curve_tangent(n_bar, mesh.position(ln.prev[v]), mesh.position(ln.next[v]));
      Vec3 d = tangent_projector(n_bar) * lap[v];
      d -= d.dot(t) * t;
      velocity[v] = d;
    }

    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      std::vector<Vec3> next = mesh.positions();
      for (std::size_t v = 0; v < nv; ++v) next[v] += step * velocity[v];
      for (std::size_t v = 0; v < nv; ++v) {
        if (mesh.is_boundary_vertex(static_cast<int>(v))) next[v] = project_to_boundary(domain, next[v]);
      }
      if (smoothing > 0.0) {
        std::vector<Vec3> smoothed = next;
        for (std::size_t v = 0; v < nv; ++v) {
          if (!mesh.is_boundary_vertex(static_cast<int>(v))) continue;
          const Vec3& prev = next[static_cast<std::size_t>(ln.prev[v])];
          const Vec3& after = next[static_cast<std::size_t>(ln.next[v])];
          const Vec3 n_bar = domain.outward_normal(next[v]);
          const Vec3 t = boundary_curve_tangent(n_bar, prev, after);
          const Vec3 shift = (0.5 * (prev + after) - next[v]).dot(t) * t;
          smoothed[v] = project_to_boundary(domain, next[v] + smoothing * shift);
        }
        next = std::move(smoothed);
      }
      TriMesh candidate = mesh.with_positions(next);
      const double candidate_area = candidate.area();
      if (config.damping && candidate_area > area + kAreaSlack) {
        step *= 0.5;
        ++report.rejected_steps;
        accepted_streak = 0;
        continue;
      }
      if (min_triangle_quality(candidate) < quality_floor) {
        fail(ErrorKind::MeshDegenerated, "triangle quality fell below 1e-3 of its initial value after " +
                                             std::to_string(report.iterations) + " iterations");
      }
      double moved = 0.0;
      for (std::size_t v = 0; v < nv; ++v) moved = std::max(moved, (next[v] - mesh.position(static_cast<int>(v))).norm());
      report.last_displacement = moved;
      mesh = std::move(candidate);
      area = candidate_area;
      accepted = true;
      break;
    }
    ++report.iterations;
    if (!accepted) break;  // no decreasing step left: stationary to round-off
    report.energy_trace.push_back(area);
    if (++accepted_streak >= 20 && step < initial_step) {
      step = std::min(initial_step, 2.0 * step);
      accepted_streak = 0;
    }
    report.converged = check(mesh);
  }
  report.final_area = area;
  report.final_step = step;
  return {std::move(mesh), std::move(report)};
}

}  // namespace fbms
