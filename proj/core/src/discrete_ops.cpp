#include "fbms/discrete_ops.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fbms/error.hpp"
#include "fbms/parallel.hpp"

namespace fbms {

namespace {

constexpr double kBoundaryTolerance = 1e-6;
constexpr double kDegenerateTangent = 1e-8;

struct Frame {
  Vec3 t1, t2, n;
};

Frame tangent_frame(const Vec3& n) {
  const Vec3 axis = std::abs(n.x()) < 0.6 ? Vec3::UnitX() : (std::abs(n.y()) < 0.6 ? Vec3::UnitY() : Vec3::UnitZ());
  const Vec3 t1 = n.cross(axis).normalized();
  return {t1, n.cross(t1), n};
}

double cot(const Vec3& a, const Vec3& b) {
  const double s = a.cross(b).norm();
  return s > 0.0 ? a.dot(b) / s : 0.0;
}

int monomial_count(int degree) { return (degree + 1) * (degree + 2) / 2 - 1; }

/// Monomials of degree 1..degree in (u, v), with the quadratic ones scaled so
/// that the coefficients are the second derivatives.
void monomials(double u, double v, int degree, double* out) {
  int k = 0;
  out[k++] = u;
  out[k++] = v;
  if (degree >= 2) {
    out[k++] = 0.5 * u * u;
    out[k++] = u * v;
    out[k++] = 0.5 * v * v;
  }
  if (degree >= 3) {
    out[k++] = u * u * u / 6.0;
    out[k++] = u * u * v / 2.0;
    out[k++] = u * v * v / 2.0;
    out[k++] = v * v * v / 6.0;
  }
}

/// Least-squares jet of the given degree over `rows`; each column of rhs is
/// fitted independently. Coordinates are rescaled by `scale` for conditioning
/// and the returned coefficients are in the original units.
Eigen::MatrixXd fit_jet(const std::vector<Eigen::Vector2d>& uv, const Eigen::MatrixXd& rhs, int degree,
                        double scale) {
  const int m = monomial_count(degree);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(uv.size()), m);
  for (std::size_t r = 0; r < uv.size(); ++r) {
    double row[9];
    monomials(uv[r].x() / scale, uv[r].y() / scale, degree, row);
    for (int k = 0; k < m; ++k) design(static_cast<Eigen::Index>(r), k) = row[k];
  }
  Eigen::MatrixXd coef = design.colPivHouseholderQr().solve(rhs);
  coef.topRows(2) /= scale;
  if (degree >= 2) coef.middleRows(2, 3) /= scale * scale;
  if (degree >= 3) coef.middleRows(5, 4) /= scale * scale * scale;
  return coef;
}

struct LocalSample {
  std::vector<int> ids;
  std::vector<Eigen::Vector2d> uv;
  std::vector<double> height;
  double scale = 1.0;
};

LocalSample sample_neighbourhood(const TriMesh& mesh, int v, const Frame& frame, int rings) {
  LocalSample s;
  s.ids = mesh.ring(v, rings);
  const Vec3& x = mesh.position(v);
  double radius = 0.0;
  for (int j : s.ids) {
    const Vec3 d = mesh.position(j) - x;
    s.uv.emplace_back(d.dot(frame.t1), d.dot(frame.t2));
    s.height.push_back(d.dot(frame.n));
    radius = std::max(radius, s.uv.back().norm());
  }
  s.scale = radius > 0.0 ? radius : 1.0;
  return s;
}

/// Shape operator at v from a height-function jet fitted in the tangent
/// frame of N, returned in ambient form and projected onto N's tangent plane.
Mat3 fit_shape_operator(const TriMesh& mesh, int v, const Vec3& n, int rings, int degree) {
  const Frame frame = tangent_frame(n);
  const LocalSample s = sample_neighbourhood(mesh, v, frame, rings);
  if (s.ids.size() < 5) {
    fail(ErrorKind::InsufficientNeighborhood,
         "vertex " + std::to_string(v) + " has " + std::to_string(s.ids.size()) + " neighbours within " +
             std::to_string(rings) + " rings, the quadric fit needs 5");
  }
  while (degree > 2 && static_cast<int>(s.ids.size()) < monomial_count(degree) + 3) --degree;
  Eigen::MatrixXd rhs(static_cast<Eigen::Index>(s.ids.size()), 1);
  for (std::size_t r = 0; r < s.ids.size(); ++r) rhs(static_cast<Eigen::Index>(r), 0) = s.height[r];
  const Eigen::MatrixXd c = fit_jet(s.uv, rhs, degree, s.scale);

  const double hu = c(0, 0), hv = c(1, 0);
  Eigen::Matrix2d hess;
  hess << c(2, 0), c(3, 0), c(3, 0), c(4, 0);
  Eigen::Matrix<double, 3, 2> basis;
  basis.col(0) = frame.t1 + hu * frame.n;
  basis.col(1) = frame.t2 + hv * frame.n;
  const Eigen::Matrix2d metric = basis.transpose() * basis;
  const double w = std::sqrt(1.0 + hu * hu + hv * hv);
  // Second fundamental form w.r.t. the fitted normal (close to N); A = -I^{-1} II.
  const Eigen::Matrix2d second = hess / w;
  const Eigen::Matrix2d metric_inv = metric.inverse();
  Mat3 a = -basis * metric_inv * second * metric_inv * basis.transpose();
  const Mat3 p = tangent_projector(n);
  a = p * a * p;
  return 0.5 * (a + a.transpose());
}

/// Normal of the fitted height function at v; corrects the one-sided bias of
/// angle-weighted normals at boundary vertices.
Vec3 fit_normal(const TriMesh& mesh, int v, const Vec3& n, int rings, int degree) {
  const Frame frame = tangent_frame(n);
  const LocalSample s = sample_neighbourhood(mesh, v, frame, rings);
  while (degree > 1 && static_cast<int>(s.ids.size()) < monomial_count(degree) + 3) --degree;
  if (static_cast<int>(s.ids.size()) < monomial_count(degree) + 1) return n;
  Eigen::MatrixXd rhs(static_cast<Eigen::Index>(s.ids.size()), 1);
  for (std::size_t r = 0; r < s.ids.size(); ++r) rhs(static_cast<Eigen::Index>(r), 0) = s.height[r];
  const Eigen::MatrixXd c = fit_jet(s.uv, rhs, degree, s.scale);
  return (frame.n - c(0, 0) * frame.t1 - c(1, 0) * frame.t2).normalized();
}

struct BoundaryCurve {
  std::vector<Vec3> conormal;
  std::vector<double> line_element;
  std::vector<Vec3> curvature;
  std::vector<int> loop;
};

BoundaryCurve boundary_curve(const TriMesh& mesh, const std::vector<Vec3>& normals) {
  const auto nv = static_cast<std::size_t>(mesh.num_vertices());
  BoundaryCurve out{std::vector<Vec3>(nv, Vec3::Zero()), std::vector<double>(nv, 0.0),
                    std::vector<Vec3>(nv, Vec3::Zero()), std::vector<int>(nv, -1)};
  const auto& loops = mesh.boundary_loops();
  for (std::size_t l = 0; l < loops.size(); ++l) {
    const auto& loop = loops[l];
    const std::size_t k = loop.size();
    for (std::size_t i = 0; i < k; ++i) {
      const int prev = loop[(i + k - 1) % k];
      const int cur = loop[i];
      const int next = loop[(i + 1) % k];
      const auto c = static_cast<std::size_t>(cur);
      out.loop[c] = static_cast<int>(l);
      const Vec3 e1 = mesh.position(cur) - mesh.position(prev);
      const Vec3 e2 = mesh.position(next) - mesh.position(cur);
      const double l1 = e1.norm(), l2 = e2.norm();
      out.line_element[c] = 0.5 * (l1 + l2);
      if (l1 > 0.0 && l2 > 0.0) out.curvature[c] = 2.0 * (e2 / l2 - e1 / l1) / (l1 + l2);

      // Outward side of each incident boundary edge in its own face.
      Vec3 outward = Vec3::Zero();
      for (const auto& [from, to] : {std::pair{prev, cur}, std::pair{cur, next}}) {
        const Edge& e = mesh.edges()[static_cast<std::size_t>(mesh.edge_index(from, to))];
        const Vec3 t = (mesh.position(to) - mesh.position(from)).normalized();
        outward += t.cross(mesh.face_normal(e.faces[0]));
      }
      const Vec3 projected = tangent_projector(normals[c]) * outward;
      if (projected.norm() > 0.0) out.conormal[c] = projected.normalized();
    }
  }
  return out;
}

}  // namespace

std::vector<double> DiscreteGeometry::principal_curvatures(int v) const {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(shape_operator[static_cast<std::size_t>(v)]);
  // Drop the eigenvalue belonging to N (the one with eigenvector closest to N).
  const Vec3& n = normal[static_cast<std::size_t>(v)];
  int normal_index = 0;
  double best = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double align = std::abs(solver.eigenvectors().col(k).dot(n));
    if (align > best) {
      best = align;
      normal_index = k;
    }
  }
  std::vector<double> out;
  for (int k = 0; k < 3; ++k) {
    if (k != normal_index) out.push_back(solver.eigenvalues()[k]);
  }
  return out;
}

std::vector<double> cotan_weights(const TriMesh& mesh) {
  std::vector<double> w(mesh.edges().size(), 0.0);
  for (const Triangle& t : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[static_cast<std::size_t>(k)];
      const int b = t[static_cast<std::size_t>((k + 1) % 3)];
      const int c = t[static_cast<std::size_t>((k + 2) % 3)];
      const double ct = cot(mesh.position(a) - mesh.position(c), mesh.position(b) - mesh.position(c));
      w[static_cast<std::size_t>(mesh.edge_index(a, b))] += 0.5 * ct;
    }
  }
  return w;
}

std::vector<double> mixed_vertex_areas(const TriMesh& mesh) {
  std::vector<double> area(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  for (int f = 0; f < mesh.num_triangles(); ++f) {
    const Triangle& t = mesh.triangles()[static_cast<std::size_t>(f)];
    const double fa = mesh.face_area(f);
    std::array<double, 3> dots{};
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.position(t[static_cast<std::size_t>(k)]);
      dots[static_cast<std::size_t>(k)] = (mesh.position(t[static_cast<std::size_t>((k + 1) % 3)]) - p)
                                              .dot(mesh.position(t[static_cast<std::size_t>((k + 2) % 3)]) - p);
    }
    const int obtuse = dots[0] < 0.0 ? 0 : (dots[1] < 0.0 ? 1 : (dots[2] < 0.0 ? 2 : -1));
    for (int k = 0; k < 3; ++k) {
      const auto vi = static_cast<std::size_t>(t[static_cast<std::size_t>(k)]);
      if (obtuse >= 0) {
        area[vi] += obtuse == k ? 0.5 * fa : 0.25 * fa;
        continue;
      }
      const Vec3& p = mesh.position(t[static_cast<std::size_t>(k)]);
      const Vec3& q = mesh.position(t[static_cast<std::size_t>((k + 1) % 3)]);
      const Vec3& r = mesh.position(t[static_cast<std::size_t>((k + 2) % 3)]);
      // |pq|^2 cot(r) + |pr|^2 cot(q), over 8.
      area[vi] += ((q - p).squaredNorm() * cot(p - r, q - r) + (r - p).squaredNorm() * cot(p - q, r - q)) / 8.0;
    }
  }
  return area;
}

Eigen::SparseMatrix<double> cotan_matrix(const TriMesh& mesh) {
  const std::vector<double> w = cotan_weights(mesh);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(mesh.edges().size() * 4);
  for (std::size_t e = 0; e < w.size(); ++e) {
    const Edge& edge = mesh.edges()[e];
    entries.emplace_back(edge.v0, edge.v1, -w[e]);
    entries.emplace_back(edge.v1, edge.v0, -w[e]);
    entries.emplace_back(edge.v0, edge.v0, w[e]);
    entries.emplace_back(edge.v1, edge.v1, w[e]);
  }
  Eigen::SparseMatrix<double> l(mesh.num_vertices(), mesh.num_vertices());
  l.setFromTriplets(entries.begin(), entries.end());
  return l;
}

namespace {

template <class T>
std::vector<T> apply_laplacian(const TriMesh& mesh, const std::vector<double>& weights,
                               const std::vector<double>& areas, const std::vector<T>& values, const T& zero) {
  if (values.size() != static_cast<std::size_t>(mesh.num_vertices())) {
    fail(ErrorKind::InvalidArgument, "laplacian_apply: expected one value per vertex");
  }
  std::vector<T> out(values.size(), zero);
  for (std::size_t e = 0; e < weights.size(); ++e) {
    const Edge& edge = mesh.edges()[e];
    const auto i = static_cast<std::size_t>(edge.v0), j = static_cast<std::size_t>(edge.v1);
    const T diff = values[j] - values[i];
    out[i] += weights[e] * diff;
    out[j] -= weights[e] * diff;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (areas[i] > 0.0) out[i] /= areas[i];
  }
  return out;
}

}  // namespace

std::vector<double> laplacian_apply(const TriMesh& mesh, const std::vector<double>& values) {
  return apply_laplacian(mesh, cotan_weights(mesh), mixed_vertex_areas(mesh), values, 0.0);
}

std::vector<double> laplacian_apply(const TriMesh& mesh, const DiscreteGeometry& geom,
                                    const std::vector<double>& values) {
  return apply_laplacian(mesh, geom.edge_weight, geom.vertex_area, values, 0.0);
}

std::vector<Vec3> laplacian_apply(const TriMesh& mesh, const DiscreteGeometry& geom, const std::vector<Vec3>& values) {
  return apply_laplacian<Vec3>(mesh, geom.edge_weight, geom.vertex_area, values, Vec3::Zero());
}

DiscreteGeometry compute_geometry(const TriMesh& mesh, const GeometryOptions& options) {
  const auto nv = static_cast<std::size_t>(mesh.num_vertices());
  DiscreteGeometry g;
  g.vertex_area = mixed_vertex_areas(mesh);
  g.edge_weight = cotan_weights(mesh);

  g.normal.assign(nv, Vec3::Zero());
  for (const Triangle& t : mesh.triangles()) {
    const Vec3 fn = (mesh.position(t[1]) - mesh.position(t[0])).cross(mesh.position(t[2]) - mesh.position(t[0]));
    if (fn.norm() == 0.0) continue;
    const Vec3 unit = fn.normalized();
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.position(t[static_cast<std::size_t>(k)]);
      const Vec3 a = mesh.position(t[static_cast<std::size_t>((k + 1) % 3)]) - p;
      const Vec3 b = mesh.position(t[static_cast<std::size_t>((k + 2) % 3)]) - p;
      const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
      g.normal[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])] += angle * unit;
    }
  }
  for (auto& n : g.normal) {
    if (n.norm() > 0.0) n.normalize();
  }

  g.is_boundary.assign(nv, 0);
  for (std::size_t v = 0; v < nv; ++v) g.is_boundary[v] = mesh.is_boundary_vertex(static_cast<int>(v)) ? 1 : 0;

  parallel_for(nv, [&](std::size_t v) {
    if (g.is_boundary[v]) g.normal[v] = fit_normal(mesh, static_cast<int>(v), g.normal[v], options.fit_rings + 1, 3);
  });

  g.shape_operator.assign(nv, Mat3::Zero());
  // Vertices whose fitting stencil reaches the boundary only see one side;
  // a wider cubic fit keeps their error at the interior level.
  const std::vector<int> near = boundary_collar(mesh, options.fit_rings);
  std::vector<char> one_sided(nv, 0);
  for (int v : near) one_sided[static_cast<std::size_t>(v)] = 1;
  parallel_for(nv, [&](std::size_t v) {
    const int rings = one_sided[v] ? options.fit_rings + 1 : options.fit_rings;
    const int degree = one_sided[v] ? 3 : 2;
    g.shape_operator[v] = fit_shape_operator(mesh, static_cast<int>(v), g.normal[v], rings, degree);
  });

  std::vector<Vec3> positions = mesh.positions();
  const std::vector<Vec3> lap_x = laplacian_apply(mesh, g, positions);
  g.mean_curvature.assign(nv, 0.0);
  g.norm_A_sq.assign(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    g.norm_A_sq[v] = g.shape_operator[v].squaredNorm();
    g.mean_curvature[v] = g.is_boundary[v] ? 0.5 * g.shape_operator[v].trace() : -0.5 * lap_x[v].dot(g.normal[v]);
  }

  BoundaryCurve curve = boundary_curve(mesh, g.normal);
  g.conormal = std::move(curve.conormal);
  g.line_element = std::move(curve.line_element);
  g.curve_curvature = std::move(curve.curvature);
  g.loop = std::move(curve.loop);
  return g;
}

double integrate_surface(const TriMesh& mesh, const DiscreteGeometry& geom, const std::vector<double>& values) {
  if (values.size() != static_cast<std::size_t>(mesh.num_vertices())) {
    fail(ErrorKind::InvalidArgument, "integrate_surface: expected one value per vertex");
  }
  double total = 0.0;
  for (std::size_t v = 0; v < values.size(); ++v) total += values[v] * geom.vertex_area[v];
  return total;
}

double integrate_boundary(const TriMesh& mesh, const DiscreteGeometry& geom, const std::vector<double>& values) {
  if (values.size() != static_cast<std::size_t>(mesh.num_vertices())) {
    fail(ErrorKind::InvalidArgument, "integrate_boundary: expected one value per vertex");
  }
  double total = 0.0;
  for (std::size_t v = 0; v < values.size(); ++v) {
    if (geom.is_boundary[v]) total += values[v] * geom.line_element[v];
  }
  return total;
}

std::vector<BoundaryRecord> boundary_frame(const TriMesh& mesh, const DiscreteGeometry& geom,
                                           const LevelSetDomain& domain) {
  std::vector<BoundaryRecord> out;
  const auto& loops = mesh.boundary_loops();
  for (std::size_t l = 0; l < loops.size(); ++l) {
    for (int v : loops[l]) {
      const auto vi = static_cast<std::size_t>(v);
      const Vec3& x = mesh.position(v);
      const double defect = std::abs(domain.value(x) - 1.0);
      if (!(defect <= kBoundaryTolerance)) {
        fail(ErrorKind::InvalidArgument,
             "boundary vertex " + std::to_string(v) + " is off the domain boundary (|F-1| = " + std::to_string(defect) + ")");
      }
      BoundaryRecord r;
      r.vertex = v;
      r.loop = static_cast<int>(l);
      r.conormal = geom.conormal[vi];
      r.domain_normal = domain.outward_normal(x);
      const Vec3& n = geom.normal[vi];
      r.normal_dot = n.dot(r.domain_normal);
      r.x_tangent = tangent_projector(n) * x;
      r.A_x_tangent = geom.shape_operator[vi] * r.x_tangent;
      r.tau_curve = -n.dot(geom.curve_curvature[vi]);
      const double h = geom.mean_curvature[vi];
      const double len2 = r.x_tangent.squaredNorm();
      if (std::sqrt(len2) < kDegenerateTangent) {
        r.degenerate = true;
        r.tau = 2.0 * h;
      } else {
        r.lambda = r.A_x_tangent.dot(r.x_tangent) / len2;
        r.tau = 2.0 * h - r.lambda;
      }
      out.push_back(r);
    }
  }
  return out;
}

std::vector<BoundaryRecord> boundary_frame_strict(const TriMesh& mesh, const DiscreteGeometry& geom,
                                                  const LevelSetDomain& domain) {
  auto frame = boundary_frame(mesh, geom, domain);
  for (const auto& r : frame) {
    if (r.degenerate) {
      fail(ErrorKind::TangentProjectionDegenerate,
           "|x^T| < 1e-8 at boundary vertex " + std::to_string(r.vertex) + "; x is nearly normal to the surface");
    }
  }
  return frame;
}

void write_geometry_csv(const TriMesh& mesh, const DiscreteGeometry& geom, const std::vector<BoundaryRecord>* frame,
                        std::ostream& out) {
  std::vector<const BoundaryRecord*> by_vertex(static_cast<std::size_t>(mesh.num_vertices()), nullptr);
  if (frame) {
    for (const auto& r : *frame) by_vertex[static_cast<std::size_t>(r.vertex)] = &r;
  }
  out << "vertex,area,nx,ny,nz,H,normA2,boundary,cx,cy,cz,lambda,tau,n_dot_nbar\n";
  const auto old_precision = out.precision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto vi = static_cast<std::size_t>(v);
    const Vec3& n = geom.normal[vi];
    out << v << ',' << geom.vertex_area[vi] << ',' << n.x() << ',' << n.y() << ',' << n.z() << ','
        << geom.mean_curvature[vi] << ',' << geom.norm_A_sq[vi] << ',' << int(geom.is_boundary[vi]);
    if (geom.is_boundary[vi]) {
      const Vec3& c = geom.conormal[vi];
      out << ',' << c.x() << ',' << c.y() << ',' << c.z();
    } else {
      out << ",,,";
    }
    if (const BoundaryRecord* r = by_vertex[vi]) {
      out << ',' << r->lambda << ',' << r->tau << ',' << r->normal_dot;
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  out.precision(old_precision);
}

std::vector<int> boundary_collar(const TriMesh& mesh, int rings, int loop) {
  std::vector<int> dist(static_cast<std::size_t>(mesh.num_vertices()), -1);
  std::vector<int> frontier;
  const auto& loops = mesh.boundary_loops();
  for (std::size_t l = 0; l < loops.size(); ++l) {
    if (loop >= 0 && static_cast<int>(l) != loop) continue;
    for (int v : loops[l]) {
      dist[static_cast<std::size_t>(v)] = 0;
      frontier.push_back(v);
    }
  }
  for (int r = 1; r <= rings; ++r) {
    std::vector<int> next;
    for (int u : frontier) {
      for (int w : mesh.neighbors(u)) {
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = r;
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<int> out;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (dist[static_cast<std::size_t>(v)] >= 0) out.push_back(v);
  }
  return out;
}

Vec3 tangent_gradient(const TriMesh& mesh, const Vec3& normal, int v, const std::vector<double>& values) {
  const Frame frame = tangent_frame(normal);
  Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
  Eigen::Vector2d atb = Eigen::Vector2d::Zero();
  for (int j : mesh.neighbors(v)) {
    const Vec3 d = mesh.position(j) - mesh.position(v);
    const Eigen::Vector2d uv(d.dot(frame.t1), d.dot(frame.t2));
    ata += uv * uv.transpose();
    atb += uv * (values[static_cast<std::size_t>(j)] - values[static_cast<std::size_t>(v)]);
  }
  const Eigen::Vector2d grad = ata.ldlt().solve(atb);
  return grad.x() * frame.t1 + grad.y() * frame.t2;
}

Vec3 directional_derivative(const TriMesh& mesh, const Vec3& normal, int v, const std::vector<Vec3>& field,
                            const Vec3& direction) {
  const Frame frame = tangent_frame(normal);
  const LocalSample s = sample_neighbourhood(mesh, v, frame, 2);
  if (s.ids.size() < 5) {
    fail(ErrorKind::InsufficientNeighborhood, "vertex " + std::to_string(v) + " has too few neighbours for a fit");
  }
  Eigen::MatrixXd rhs(static_cast<Eigen::Index>(s.ids.size()), 3);
  const Vec3& base = field[static_cast<std::size_t>(v)];
  for (std::size_t r = 0; r < s.ids.size(); ++r) {
    rhs.row(static_cast<Eigen::Index>(r)) = (field[static_cast<std::size_t>(s.ids[r])] - base).transpose();
  }
  const Eigen::MatrixXd c = fit_jet(s.uv, rhs, 2, s.scale);
  const double du = direction.dot(frame.t1), dv = direction.dot(frame.t2);
  return (du * c.row(0) + dv * c.row(1)).transpose();
}

}  // namespace fbms
