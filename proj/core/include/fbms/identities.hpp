#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fbms/discrete_ops.hpp"
#include "fbms/domains.hpp"
#include "fbms/mesh.hpp"

namespace fbms {

/// Built-in test functions phi.
enum class TestFunction { One, X1, X2, X3, NormSq, X1X2 };

std::string to_string(TestFunction phi);
/// Accepts "1", "x1", "x2", "x3", "|x|^2" (or "normsq"), "x1x2"; throws InvalidArgument.
TestFunction parse_test_function(const std::string& name);
double evaluate(TestFunction phi, const Vec3& x);

/// Integral identities for a surface Sigma^2 in a domain of R^3 with boundary
/// F = 1 (dimension constant N - 1 = 2 throughout).
///
///  Fundamental(phi)    int_dS |grad F| phi = int_S phi Lap F + int_S (1 - F) Lap phi
///  Minkowski           int_dS <x, Nbar> = 2 |S|
///  Homogeneous(k)      int_dS k (1 - c) / |grad F| = 2 |S|   (F k-homogeneous up to a constant c)
///  QuadricLaplacian    Lap F = 2 sum_i a_i (1 - N_i^2), pointwise at interior vertices
///  QuadricCombined     int_dS (|grad F|^2 + b x3 - 2(1 - c)) / |grad F| = int_S (2 sum_i a_i (1 - N_i^2) - 2)
///  RotationalCombined  int_dS (f f'^2 + y f') / sqrt(1 + f'^2) = int_S (N3^2 - 1)(f'^2 + f f'' + 1)
///  BallHalf(phi)       int_dS phi = 2 int_S phi + 1/2 int_S (1 - |x|^2) Lap phi
struct IdentityKind {
  enum class Tag { Fundamental, Minkowski, Homogeneous, QuadricLaplacian, QuadricCombined, RotationalCombined, BallHalf };

  Tag tag = Tag::Minkowski;
  TestFunction phi = TestFunction::One;
  int degree = 2;

  static IdentityKind fundamental(TestFunction phi) { return {Tag::Fundamental, phi, 2}; }
  static IdentityKind minkowski() { return {Tag::Minkowski, TestFunction::One, 2}; }
  static IdentityKind homogeneous(int k = 2) { return {Tag::Homogeneous, TestFunction::One, k}; }
  static IdentityKind quadric_laplacian() { return {Tag::QuadricLaplacian, TestFunction::One, 2}; }
  static IdentityKind quadric_combined() { return {Tag::QuadricCombined, TestFunction::One, 2}; }
  static IdentityKind rotational_combined() { return {Tag::RotationalCombined, TestFunction::One, 2}; }
  static IdentityKind ball_half(TestFunction phi) { return {Tag::BallHalf, phi, 2}; }

  bool requires_minimality() const;
  std::string name() const;
};

/// Accepts the CLI tags: fundamental, minkowski, homogeneous, quadric-laplacian,
/// quadric-combined, rotational-combined, ball-half.
IdentityKind parse_identity(const std::string& tag, TestFunction phi = TestFunction::One, int degree = 2);

struct IdentityLevel {
  int triangles = 0;
  /// Mean edge length.
  double h = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// |lhs - rhs|; for QuadricLaplacian the max pointwise error instead, with
  /// lhs/rhs the interior integrals of both sides.
  double residual = 0.0;
  /// residual / max(|lhs|, |rhs|), or residual / magnitude when both sides
  /// vanish (magnitude = integral of the absolute integrands); for
  /// QuadricLaplacian, residual / max pointwise value.
  double relative_residual = 0.0;
  double magnitude = 0.0;
};

struct IdentityReport {
  IdentityKind kind;
  std::vector<IdentityLevel> levels;
  /// Least-squares slope of log(relative_residual) against log(h); present
  /// when there are at least three levels and the residuals are not at
  /// round-off.
  std::optional<double> estimated_order;
  /// Every level's residual is at round-off (<= 1e-12 of the magnitude of
  /// the terms), so no convergence order can be measured.
  bool exact = false;
  /// Minimality gate on the input mesh.
  bool hypothesis_met = true;
  std::string hypothesis_message;
  /// max interior |H| * bbox diagonal of the input mesh.
  double minimality_residual = 0.0;
};

/// Produces the next level of a convergence study from the current one.
using Refiner = std::function<TriMesh(const TriMesh&, int level)>;

struct IdentityOptions {
  /// Number of meshes evaluated: the input plus levels - 1 refinements.
  int levels = 1;
  /// Gate on max interior |H| * diameter for identities that need minimality
  /// (ten times the solver's default tol_H).
  double minimality_threshold = 1e-2;
  /// Defaults to refine(mesh, &domain).
  Refiner refiner;
};

/// Evaluates the identity on the mesh and its refinements. A failed
/// minimality gate is recorded in the report rather than thrown. Throws
/// InvalidArgument when the identity does not apply to the domain (e.g.
/// BallHalf off the ball), DegenerateGradient from the domain normal.
IdentityReport check_identity(const IdentityKind& kind, const TriMesh& mesh, const LevelSetDomain& domain,
                              const IdentityOptions& options = {});

/// Single-level evaluation used by check_identity.
IdentityLevel evaluate_identity(const IdentityKind& kind, const TriMesh& mesh, const DiscreteGeometry& geom,
                                const LevelSetDomain& domain);

/// Both sides of int_dS |grad F| = int_S Lap F, assembled independently of
/// the Fundamental identity's code path.
std::pair<double, double> fundamental_particular(const TriMesh& mesh, const DiscreteGeometry& geom,
                                                 const LevelSetDomain& domain);

/// Laplacian of a vertex field at interior vertices; each boundary vertex
/// takes the mean over its interior neighbours (or 0 when it has none).
std::vector<double> interior_laplacian(const TriMesh& mesh, const DiscreteGeometry& geom,
                                       const std::vector<double>& values);

/// Least-squares slope of log(y) against log(x), ignoring non-positive y.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class SignPattern { Positive, Negative, NonNegative, NonPositive, Zero, Mixed };

std::string to_string(SignPattern pattern);

struct DirectionSign {
  Vec3 direction = Vec3::Zero();
  SignPattern pattern = SignPattern::Mixed;
  double min = 0.0;
  double max = 0.0;
  std::string conclusion;
};

struct SignatureReport {
  int samples = 0;
  std::vector<DirectionSign> directions;
  /// Strongest conclusion over all directions.
  std::string conclusion;
};

struct SignatureOptions {
  int samples = 10000;
  /// Checked in addition to the coordinate axes.
  std::vector<Vec3> extra_directions;
  /// Half-width of the box the quasi-random seeds are drawn from before
  /// projection (quadrics and custom fields).
  double box = 2.0;
};

/// Sign pattern of dF/dv over a quasi-random sample of the domain boundary
/// (Halton seeds projected onto F = 1, or (theta, y) samples for profiles).
SignatureReport signature_scan(const LevelSetDomain& domain, const SignatureOptions& options = {});

}  // namespace fbms
