#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "fbms/spline.hpp"
#include "fbms/types.hpp"

namespace fbms {

/// F(x) = sum_i a_i x_i^2 + b x_n + c with a_i in {-1, 0, 1}.
/// Classification works for any n >= 2; field evaluation requires n == 3.
struct QuadricSpec {
  int n = 3;
  std::vector<int> a;
  double b = 0.0;
  double c = 0.0;

  /// Throws InvalidArgument on a malformed spec (wrong length, a_i outside
  /// {-1,0,1}, or F identically constant).
  void validate() const;
};

/// Generating curve of a rotational domain: the boundary is |(x1,x2)| = f(x3)
/// for x3 in [y0, y1], and F(x) = x1^2 + x2^2 - f(x3)^2 + 1.
class ProfileCurve {
public:
  enum class Family { Sphere, Catenoid, Cone, Cylinder, Sampled };

  /// f(y) = sqrt(r^2 - y^2)
  static ProfileCurve sphere(double radius, double y0, double y1);
  /// f(y) = k cosh(y / k)
  static ProfileCurve catenoid(double scale, double y0, double y1);
  /// f(y) = f0 + slope * y
  static ProfileCurve cone(double f0, double slope, double y0, double y1);
  /// f(y) = r
  static ProfileCurve cylinder(double radius, double y0, double y1);
  /// Natural cubic spline through (y_i, f_i); the interval is [y.front(), y.back()].
  static ProfileCurve sampled(std::vector<double> y, std::vector<double> f);

  Family family() const { return family_; }
  double y0() const { return y0_; }
  double y1() const { return y1_; }
  bool contains(double y) const { return y >= y0_ && y <= y1_; }

  double f(double y) const;
  double df(double y) const;
  double d2f(double y) const;

  /// Family parameters: sphere {r}, catenoid {k}, cone {f0, slope}, cylinder {r}.
  const std::vector<double>& parameters() const { return params_; }
  const CubicSpline& spline() const { return spline_; }

private:
  ProfileCurve(Family family, std::vector<double> params, double y0, double y1);
  void check_positive() const;
  void require_inside(double y) const;

  Family family_ = Family::Cylinder;
  std::vector<double> params_;
  double y0_ = 0.0;
  double y1_ = 0.0;
  CubicSpline spline_;
};

std::string to_string(ProfileCurve::Family family);

/// Ellipsoid of revolution about the x3 axis: x1^2/a^2 + x2^2/a^2 + x3^2/b^2.
struct EllipsoidSpec {
  double a = 1.0;
  double b = 1.0;

  void validate() const;
};

/// Unit ball, F = |x|^2.
struct Ball {};

/// Caller-provided scalar field with its derivatives.
struct CustomField {
  std::string name = "custom";
  std::function<double(const Vec3&)> value;
  std::function<Vec3(const Vec3&)> gradient;
  std::function<Mat3(const Vec3&)> hessian;
};

struct FieldSample {
  double value = 0.0;
  Vec3 grad = Vec3::Zero();
  Mat3 hess = Mat3::Zero();
};

/// Domain whose boundary is the level set F = 1, with outward normal
/// grad F / |grad F|. Immutable after construction.
class LevelSetDomain {
public:
  using Kind = std::variant<Ball, QuadricSpec, ProfileCurve, EllipsoidSpec, CustomField>;

  explicit LevelSetDomain(Kind kind);

  static LevelSetDomain ball() { return LevelSetDomain(Ball{}); }
  static LevelSetDomain quadric(QuadricSpec spec) { return LevelSetDomain(std::move(spec)); }
  static LevelSetDomain rotational(ProfileCurve profile) { return LevelSetDomain(std::move(profile)); }
  static LevelSetDomain ellipsoid(EllipsoidSpec spec) { return LevelSetDomain(spec); }
  static LevelSetDomain custom(CustomField field) { return LevelSetDomain(std::move(field)); }

  const Kind& kind() const { return kind_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }
  std::string name() const;

  /// Closed-form F, grad F and Hess F. Throws QueryOutsideProfileInterval for
  /// rotational domains queried outside the profile interval.
  FieldSample evaluate(const Vec3& p) const;
  double value(const Vec3& p) const { return evaluate(p).value; }
  Vec3 gradient(const Vec3& p) const { return evaluate(p).grad; }

  /// grad F / |grad F| at a boundary point; throws DegenerateGradient when
  /// |grad F| < min_gradient.
  Vec3 outward_normal(const Vec3& p, double min_gradient = 1e-12) const;

private:
  Kind kind_;
};

struct ProjectionOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
  double min_gradient = 1e-12;
};

/// Newton iteration along grad F onto F = 1. Throws ProjectionDiverged if
/// |F - 1| does not reach the tolerance, DegenerateGradient if grad F vanishes
/// on the way.
Vec3 project_to_boundary(const LevelSetDomain& domain, const Vec3& p, const ProjectionOptions& options = {});

enum class Outcome { NoExistence, OnlyTotallyGeodesic, Unconstrained };

std::string to_string(Outcome outcome);

struct Verdict {
  Outcome outcome = Outcome::Unconstrained;
  std::string description;
  std::string citation;
};

Verdict classify_quadric(const QuadricSpec& spec);

struct ProfileClassifyOptions {
  int samples = 1024;
  double tolerance = 1e-10;
};

Verdict classify_profile(const ProfileCurve& profile, const ProfileClassifyOptions& options = {});

/// Dispatches on the domain kind. The ball is treated as the quadric
/// a = (1,1,1), b = c = 0; ellipsoids and custom fields are Unconstrained.
Verdict classify(const LevelSetDomain& domain);

}  // namespace fbms
