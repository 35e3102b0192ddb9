#include "fbms/reference.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "fbms/error.hpp"

namespace fbms {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 unit_circle(double angle) { return {std::cos(angle), std::sin(angle), 0.0}; }

/// Zipper between two concentric rings whose vertex angles increase from 0.
void stitch_rings(const std::vector<int>& inner, const std::vector<double>& inner_angle, const std::vector<int>& outer,
                  const std::vector<double>& outer_angle, std::vector<Triangle>& out) {
  const std::size_t ni = inner.size(), no = outer.size();
  std::size_t i = 0, j = 0;
  while (i < ni || j < no) {
    const double next_inner = i < ni ? (i + 1 < ni ? inner_angle[i + 1] : inner_angle[0] + 2 * kPi) : 1e300;
    const double next_outer = j < no ? (j + 1 < no ? outer_angle[j + 1] : outer_angle[0] + 2 * kPi) : 1e300;
    if (next_outer <= next_inner) {
      out.push_back({inner[i % ni], outer[j], outer[(j + 1) % no]});
      ++j;
    } else {
      out.push_back({inner[i], outer[j % no], inner[(i + 1) % ni]});
      ++i;
    }
  }
}

/// Unit-disk parameter points (x3 = 0) and triangles.
std::pair<std::vector<Vec3>, std::vector<Triangle>> hex_disk_parameter(int rings) {
  std::vector<Vec3> pts{Vec3::Zero()};
  std::vector<Triangle> tris;
  std::vector<int> prev{0};
  std::vector<double> prev_angle{0.0};
  for (int k = 1; k <= rings; ++k) {
    std::vector<int> ring;
    std::vector<double> angle;
    const int count = 6 * k;
    const double r = static_cast<double>(k) / rings;
    const double blend = r * r;
    for (int j = 0; j < count; ++j) {
      // Triangular-lattice point on the hexagon of circumradius r, pulled
      // towards the circle of radius r more strongly near the rim.
      const int side = j / k, step = j % k;
      const Vec3 lattice = r * (unit_circle(side * kPi / 3) * (k - step) + unit_circle((side + 1) * kPi / 3) * step) / k;
      double t = std::atan2(lattice.y(), lattice.x());
      if (t < 0.0) t += 2 * kPi;
      ring.push_back(static_cast<int>(pts.size()));
      angle.push_back(t);
      pts.push_back((1.0 - blend) * lattice + blend * r * unit_circle(t));
    }
    if (k == 1) {
      for (int j = 0; j < count; ++j) tris.push_back({0, ring[static_cast<std::size_t>(j)], ring[static_cast<std::size_t>((j + 1) % count)]});
    } else {
      stitch_rings(prev, prev_angle, ring, angle, tris);
    }
    prev = std::move(ring);
    prev_angle = std::move(angle);
  }
  return {std::move(pts), std::move(tris)};
}

void project_boundary(std::vector<Vec3>& pts, const TriMesh& topology, const LevelSetDomain& domain) {
  for (const auto& loop : topology.boundary_loops()) {
    for (int v : loop) pts[static_cast<std::size_t>(v)] = project_to_boundary(domain, pts[static_cast<std::size_t>(v)]);
  }
}

LevelSetDomain ball_of_radius(double r) {
  if (r == 1.0) return LevelSetDomain::ball();
  const double inv = 1.0 / (r * r);
  return LevelSetDomain::custom({"ball(r=" + std::to_string(r) + ")",
                                 [inv](const Vec3& p) { return inv * p.squaredNorm(); },
                                 [inv](const Vec3& p) -> Vec3 { return 2.0 * inv * p; },
                                 [inv](const Vec3&) -> Mat3 { return 2.0 * inv * Mat3::Identity(); }});
}

}  // namespace

CatenoidParameters solve_critical_catenoid() {
  auto residual = [](double s) { return s * std::tanh(s) - 1.0; };
  double lo = 1.0, hi = 1.5;
  // s tanh s is increasing on (0, inf), so the bracket holds a single root.
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  const double s0 = std::abs(residual(lo)) <= std::abs(residual(hi)) ? lo : hi;
  return {s0, 1.0 / (s0 * std::cosh(s0))};
}

std::string to_string(ReferenceKind kind) {
  switch (kind) {
    case ReferenceKind::EquatorialDisk: return "equatorial-disk";
    case ReferenceKind::CriticalCatenoid: return "critical-catenoid";
    case ReferenceKind::EllipsoidDisk: return "ellipsoid-disk";
    case ReferenceKind::CylinderDisk: return "cylinder-disk";
  }
  return "unknown";
}

ReferenceSpec ReferenceSpec::equatorial_disk(double radius) {
  ReferenceSpec s;
  s.kind = ReferenceKind::EquatorialDisk;
  s.radius = radius;
  return s;
}

ReferenceSpec ReferenceSpec::critical_catenoid() {
  ReferenceSpec s;
  s.kind = ReferenceKind::CriticalCatenoid;
  return s;
}

ReferenceSpec ReferenceSpec::ellipsoid_disk(EllipsoidSpec spec, EllipsoidPlane plane, double azimuth) {
  spec.validate();
  ReferenceSpec s;
  s.kind = ReferenceKind::EllipsoidDisk;
  s.ellipsoid = spec;
  s.plane = plane;
  s.azimuth = azimuth;
  return s;
}

ReferenceSpec ReferenceSpec::cylinder_disk(double height) {
  ReferenceSpec s;
  s.kind = ReferenceKind::CylinderDisk;
  s.height = height;
  return s;
}

std::string ReferenceSurface::name() const {
  if (spec.kind == ReferenceKind::EllipsoidDisk) {
    return spec.plane == EllipsoidPlane::Equatorial ? "ellipsoid-disk-equatorial" : "ellipsoid-disk-meridian";
  }
  return to_string(spec.kind);
}

LevelSetDomain ReferenceSurface::domain() const {
  switch (spec.kind) {
    case ReferenceKind::EquatorialDisk: return ball_of_radius(spec.radius);
    case ReferenceKind::CriticalCatenoid: return LevelSetDomain::ball();
    case ReferenceKind::EllipsoidDisk: return LevelSetDomain::ellipsoid(spec.ellipsoid);
    case ReferenceKind::CylinderDisk: return LevelSetDomain::quadric({3, {1, 1, 0}, 0.0, 0.0});
  }
  fail(ErrorKind::InvalidArgument, "unknown reference kind");
}

ReferenceSurface reference_surface(const ReferenceSpec& spec) {
  ReferenceSurface s;
  s.spec = spec;
  switch (spec.kind) {
    case ReferenceKind::EquatorialDisk:
      if (!(spec.radius > 0.0)) fail(ErrorKind::InvalidArgument, "disk radius must be positive");
      s.exact_area = kPi * spec.radius * spec.radius;
      s.exact_boundary_length = 2 * kPi * spec.radius;
      break;
    case ReferenceKind::CriticalCatenoid: {
      const CatenoidParameters p = solve_critical_catenoid();
      s.catenoid = p;
      // Area element c^2 cosh^2 s ds dt.
      s.exact_area = 2 * kPi * p.c * p.c * (p.s0 + std::sinh(p.s0) * std::cosh(p.s0));
      s.exact_boundary_length = 4 * kPi * p.c * std::cosh(p.s0);
      break;
    }
    case ReferenceKind::EllipsoidDisk: {
      spec.ellipsoid.validate();
      const double a = spec.ellipsoid.a, b = spec.ellipsoid.b;
      if (spec.plane == EllipsoidPlane::Equatorial) {
        s.exact_area = kPi * a * a;
        s.exact_boundary_length = 2 * kPi * a;
      } else {
        s.exact_area = kPi * a * b;
        s.exact_boundary_length = 4 * a * std::comp_ellint_2(std::sqrt(1.0 - (b * b) / (a * a)));
      }
      break;
    }
    case ReferenceKind::CylinderDisk:
      s.exact_area = kPi;
      s.exact_boundary_length = 2 * kPi;
      break;
  }
  return s;
}

TriMesh ReferenceSurface::sample(int resolution) const {
  if (resolution < 8) fail(ErrorKind::InvalidArgument, "reference resolution must be >= 8");
  if (spec.kind == ReferenceKind::CriticalCatenoid) {
    const CatenoidParameters p = catenoid.value_or(solve_critical_catenoid());
    const int segments = resolution;
    const int rows = std::max(2, static_cast<int>(std::lround(resolution * p.s0 / kPi)));
    std::vector<Vec3> pts;
    std::vector<Triangle> tris;
    for (int i = 0; i <= rows; ++i) {
      const double s = -p.s0 + 2.0 * p.s0 * i / rows;
      for (int j = 0; j < segments; ++j) {
        const double t = 2 * kPi * j / segments;
        pts.emplace_back(p.c * std::cosh(s) * std::cos(t), p.c * std::cosh(s) * std::sin(t), p.c * s);
      }
    }
    auto id = [segments](int i, int j) { return i * segments + (j % segments); };
    // Same diagonal in every quad, so rotating by one segment maps the mesh
    // onto itself and all vertices of a row see identical neighbourhoods.
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < segments; ++j) {
        tris.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
        tris.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
      }
    }
    TriMesh topology(pts, tris);
    project_boundary(pts, topology, domain());
    return topology.with_positions(std::move(pts));
  }

  auto [param, tris] = hex_disk_parameter(resolution);
  std::vector<Vec3> pts;
  pts.reserve(param.size());
  for (const Vec3& q : param) {
    switch (spec.kind) {
      case ReferenceKind::EquatorialDisk: pts.push_back(spec.radius * q); break;
      case ReferenceKind::CylinderDisk: pts.emplace_back(q.x(), q.y(), spec.height); break;
      case ReferenceKind::EllipsoidDisk: {
        const double a = spec.ellipsoid.a, b = spec.ellipsoid.b;
        if (spec.plane == EllipsoidPlane::Equatorial) {
          pts.push_back(a * q);
        } else {
          const Vec3 radial(std::cos(spec.azimuth), std::sin(spec.azimuth), 0.0);
          pts.push_back(a * q.x() * radial + b * q.y() * Vec3::UnitZ());
        }
        break;
      }
      case ReferenceKind::CriticalCatenoid: break;
    }
  }
  TriMesh topology(pts, std::move(tris));
  project_boundary(pts, topology, domain());
  return topology.with_positions(std::move(pts));
}

std::pair<TriMesh, ReferenceSurface> make_reference(const ReferenceSpec& spec, int resolution) {
  ReferenceSurface surface = reference_surface(spec);
  TriMesh mesh = surface.sample(resolution);
  return {std::move(mesh), std::move(surface)};
}

nlohmann::json reference_sidecar(const ReferenceSurface& surface, int resolution) {
  nlohmann::json doc = {{"kind", surface.name()},
                        {"resolution", resolution},
                        {"exact_area", surface.exact_area},
                        {"exact_boundary_length", surface.exact_boundary_length}};
  if (surface.catenoid) {
    doc["s0"] = surface.catenoid->s0;
    doc["c"] = surface.catenoid->c;
  }
  switch (surface.spec.kind) {
    case ReferenceKind::EquatorialDisk: doc["radius"] = surface.spec.radius; break;
    case ReferenceKind::EllipsoidDisk:
      doc["a"] = surface.spec.ellipsoid.a;
      doc["b"] = surface.spec.ellipsoid.b;
      if (surface.spec.plane == EllipsoidPlane::Meridian) doc["azimuth"] = surface.spec.azimuth;
      break;
    case ReferenceKind::CylinderDisk: doc["height"] = surface.spec.height; break;
    case ReferenceKind::CriticalCatenoid: break;
  }
  return doc;
}

TriMesh hex_disk(int rings, double radius) {
  if (rings < 1) fail(ErrorKind::InvalidArgument, "hex_disk needs at least one ring");
  auto [pts, tris] = hex_disk_parameter(rings);
  for (Vec3& p : pts) p *= radius;
  return TriMesh(std::move(pts), std::move(tris));
}

TriMesh icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> pts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& p : pts) p.normalize();
  std::vector<Triangle> tris = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                                {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                                {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      pts.push_back((pts[static_cast<std::size_t>(a)] + pts[static_cast<std::size_t>(b)]).normalized());
      const int id = static_cast<int>(pts.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    for (const Triangle& tri : tris) {
      const int ab = midpoint(tri[0], tri[1]), bc = midpoint(tri[1], tri[2]), ca = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({ab, tri[1], bc});
      next.push_back({ca, bc, tri[2]});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  return TriMesh(std::move(pts), std::move(tris));
}

TriMesh spherical_cap(int rings, double sphere_radius, double max_polar) {
  auto [pts, tris] = hex_disk_parameter(rings);
  for (Vec3& p : pts) {
    const double r = std::hypot(p.x(), p.y());
    const double polar = r * max_polar;
    const double phi = std::atan2(p.y(), p.x());
    p = sphere_radius * Vec3(std::sin(polar) * std::cos(phi), std::sin(polar) * std::sin(phi), std::cos(polar));
  }
  return TriMesh(std::move(pts), std::move(tris));
}

TriMesh cylinder_annulus(double half_height, int segments, int rows) {
  if (!(half_height > 0.0 && half_height < 1.0) || segments < 3 || rows < 1) {
    fail(ErrorKind::InvalidArgument, "cylinder_annulus: need 0 < h < 1, segments >= 3, rows >= 1");
  }
  const double radius = std::sqrt(1.0 - half_height * half_height);
  std::vector<Vec3> pts;
  std::vector<Triangle> tris;
  for (int i = 0; i <= rows; ++i) {
    const double z = -half_height + 2.0 * half_height * i / rows;
    for (int j = 0; j < segments; ++j) pts.push_back(radius * unit_circle(2 * kPi * j / segments) + z * Vec3::UnitZ());
  }
  auto id = [segments](int i, int j) { return i * segments + (j % segments); };
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < segments; ++j) {
      if ((i + j) % 2 == 0) {
        tris.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
        tris.push_back({id(i, j), id(i + 1, j + 1), id(i + 1, j)});
      } else {
        tris.push_back({id(i, j), id(i, j + 1), id(i + 1, j)});
        tris.push_back({id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)});
      }
    }
  }
  return TriMesh(std::move(pts), std::move(tris));
}

TriMesh perturbed_disk(int rings, double amplitude, std::uint64_t seed) {
  TriMesh disk = hex_disk(rings);
  std::vector<Vec3> pts = disk.positions();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-amplitude, amplitude);
  // Ring k holds 6k vertices starting at index 1 + 3k(k-1); the antipode of
  // slot j is slot j + 3k.
  for (int k = 1; k <= rings; ++k) {
    const int base = 1 + 3 * k * (k - 1);
    for (int j = 0; j < 3 * k; ++j) {
      const double dz = noise(rng);
      pts[static_cast<std::size_t>(base + j)].z() += dz;
      pts[static_cast<std::size_t>(base + j + 3 * k)].z() -= dz;
    }
  }
  project_boundary(pts, disk, LevelSetDomain::ball());
  return disk.with_positions(std::move(pts));
}

ReferenceSpec reference_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    fail(ErrorKind::ParseError, "reference: expected an object with a string \"kind\"");
  }
  auto number = [&](const char* key, double fallback) {
    if (!doc.contains(key)) return fallback;
    if (!doc[key].is_number()) fail(ErrorKind::ParseError, std::string("reference: \"") + key + "\" must be a number");
    return doc[key].get<double>();
  };
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "equatorial-disk") return ReferenceSpec::equatorial_disk(number("radius", 1.0));
  if (kind == "critical-catenoid") return ReferenceSpec::critical_catenoid();
  if (kind == "ellipsoid-disk-equatorial" || kind == "ellipsoid-disk-meridian") {
    const EllipsoidSpec e{number("a", 2.0), number("b", 1.0)};
    return ReferenceSpec::ellipsoid_disk(
        e, kind == "ellipsoid-disk-equatorial" ? EllipsoidPlane::Equatorial : EllipsoidPlane::Meridian,
        number("azimuth", 0.0));
  }
  if (kind == "cylinder-disk") return ReferenceSpec::cylinder_disk(number("height", 0.0));
  fail(ErrorKind::ParseError, "reference: unknown kind \"" + kind +
                                  "\" (equatorial-disk, critical-catenoid, ellipsoid-disk-equatorial, "
                                  "ellipsoid-disk-meridian, cylinder-disk)");
}

}  // namespace fbms
