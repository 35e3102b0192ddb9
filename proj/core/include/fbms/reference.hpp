#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "fbms/domains.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

/// Scale of the catenoid c (cosh s cos t, cosh s sin t, s), s in [-s0, s0],
/// that meets the unit sphere orthogonally. Orthogonality means the position
/// vector is tangent to the meridian at s0, i.e. s0 tanh s0 = 1; the boundary
/// then lies on the sphere iff c = 1 / (s0 cosh s0).
struct CatenoidParameters {
  double s0 = 0.0;
  double c = 0.0;
};

CatenoidParameters solve_critical_catenoid();

enum class ReferenceKind { EquatorialDisk, CriticalCatenoid, EllipsoidDisk, CylinderDisk };
enum class EllipsoidPlane { Equatorial, Meridian };

std::string to_string(ReferenceKind kind);

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::EquatorialDisk;
  /// EquatorialDisk: radius of the ball (and of the disk).
  double radius = 1.0;
  EllipsoidSpec ellipsoid{2.0, 1.0};
  EllipsoidPlane plane = EllipsoidPlane::Equatorial;
  /// Meridian plane azimuth for EllipsoidDisk(Meridian).
  double azimuth = 0.0;
  /// CylinderDisk: the disk lies in x3 = height.
  double height = 0.0;

  static ReferenceSpec equatorial_disk(double radius = 1.0);
  static ReferenceSpec critical_catenoid();
  static ReferenceSpec ellipsoid_disk(EllipsoidSpec spec, EllipsoidPlane plane, double azimuth = 0.0);
  static ReferenceSpec cylinder_disk(double height);
};

struct ReferenceSurface {
  ReferenceSpec spec;
  double exact_area = 0.0;
  double exact_boundary_length = 0.0;
  std::optional<CatenoidParameters> catenoid;

  std::string name() const;
  /// The domain the surface is free boundary in: the ball of the disk's
  /// radius, the unit ball, the ellipsoid, or the cylinder x1^2 + x2^2 = 1.
  LevelSetDomain domain() const;
  /// Structured mesh. Disks: `resolution` concentric rings (6k vertices on
  /// ring k). Catenoid: `resolution` segments around, about resolution*s0/pi
  /// rows along the axis. Throws InvalidArgument for resolution < 8.
  TriMesh sample(int resolution) const;
};

ReferenceSurface reference_surface(const ReferenceSpec& spec);
std::pair<TriMesh, ReferenceSurface> make_reference(const ReferenceSpec& spec, int resolution);

/// {kind, exact_area, exact_boundary_length, resolution, s0, c, ...}
nlohmann::json reference_sidecar(const ReferenceSurface& surface, int resolution);

/// Inverse of the sidecar: reads "kind" (a ReferenceSurface::name()) and its
/// parameters (radius, a, b, azimuth, height), defaulting the missing ones.
/// Throws ParseError.
ReferenceSpec reference_spec_from_json(const nlohmann::json& doc);

/// Flat disk of the given radius in x3 = 0 with `rings` concentric rings;
/// oriented so that N = +E3.
TriMesh hex_disk(int rings, double radius = 1.0);

/// Unit icosphere with outward orientation (20 * 4^subdivisions faces).
TriMesh icosphere(int subdivisions);

/// Cap of the sphere of radius `sphere_radius` around +E3 up to polar angle
/// `max_polar`, outward oriented.
TriMesh spherical_cap(int rings, double sphere_radius, double max_polar);

/// Cylinder x1^2 + x2^2 = 1 - h^2 between x3 = -h and x3 = h, so both
/// boundary circles lie on the unit sphere; normal points away from the axis.
TriMesh cylinder_annulus(double half_height, int segments, int rows);

/// Equatorial unit disk with interior noise in x3 of amplitude <= `amplitude`,
/// odd under x -> -x (so the translation mode of the disk is not excited);
/// boundary vertices are displaced as well and then projected back onto the
/// unit sphere.
TriMesh perturbed_disk(int rings, double amplitude, std::uint64_t seed);

}  // namespace fbms
