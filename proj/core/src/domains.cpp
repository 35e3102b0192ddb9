#include "fbms/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fbms/error.hpp"

namespace fbms {

namespace {

constexpr const char* kCiteBneq0 = "Theorem (bneq0)";
constexpr const char* kCiteAllOne = "Theorem (all=1)";
constexpr const char* kCiteTwoSheets = "Theorem (2sheets)";
constexpr const char* kCiteCylinderCone = "Theorem (cilindcone)";
constexpr const char* kCiteRotational = "Theorem (rotational f'>=0)";

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------- QuadricSpec

void QuadricSpec::validate() const {
  if (n < 2) fail(ErrorKind::InvalidArgument, "quadric: n must be >= 2");
  if (static_cast<int>(a.size()) != n) {
    fail(ErrorKind::InvalidArgument,
         "quadric: expected " + std::to_string(n) + " coefficients, got " + std::to_string(a.size()));
  }
  for (int ai : a) {
    if (ai < -1 || ai > 1) fail(ErrorKind::InvalidArgument, "quadric: coefficients must lie in {-1, 0, 1}");
  }
  const bool all_zero = std::all_of(a.begin(), a.end(), [](int v) { return v == 0; });
  if (all_zero && b == 0.0) fail(ErrorKind::InvalidArgument, "quadric: F is constant");
  if (!std::isfinite(b) || !std::isfinite(c)) fail(ErrorKind::InvalidArgument, "quadric: b and c must be finite");
}

// --------------------------------------------------------------- ProfileCurve

ProfileCurve::ProfileCurve(Family family, std::vector<double> params, double y0, double y1)
    : family_(family), params_(std::move(params)), y0_(y0), y1_(y1) {
  if (!(y1_ > y0_)) fail(ErrorKind::InvalidArgument, "profile: interval must satisfy y0 < y1");
}

ProfileCurve ProfileCurve::sphere(double radius, double y0, double y1) {
  if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "profile: sphere radius must be positive");
  if (y0 <= -radius || y1 >= radius) fail(ErrorKind::InvalidArgument, "profile: sphere interval must lie inside (-r, r)");
  ProfileCurve p(Family::Sphere, {radius}, y0, y1);
  p.check_positive();
  return p;
}

ProfileCurve ProfileCurve::catenoid(double scale, double y0, double y1) {
  if (!(scale > 0.0)) fail(ErrorKind::InvalidArgument, "profile: catenoid scale must be positive");
  ProfileCurve p(Family::Catenoid, {scale}, y0, y1);
  p.check_positive();
  return p;
}

ProfileCurve ProfileCurve::cone(double f0, double slope, double y0, double y1) {
  ProfileCurve p(Family::Cone, {f0, slope}, y0, y1);
  p.check_positive();
  return p;
}

ProfileCurve ProfileCurve::cylinder(double radius, double y0, double y1) {
  ProfileCurve p(Family::Cylinder, {radius}, y0, y1);
  p.check_positive();
  return p;
}

ProfileCurve ProfileCurve::sampled(std::vector<double> y, std::vector<double> f) {
  if (y.size() < 4) fail(ErrorKind::InvalidArgument, "profile: sampled profile needs at least 4 points");
  const double y0 = y.front();
  const double y1 = y.back();
  ProfileCurve p(Family::Sampled, {}, y0, y1);
  p.spline_ = CubicSpline(std::move(y), std::move(f));
  p.check_positive();
  return p;
}

void ProfileCurve::check_positive() const {
  constexpr int kSamples = 1024;
  for (int k = 0; k < kSamples; ++k) {
    const double y = y0_ + (y1_ - y0_) * k / (kSamples - 1);
    if (!(f(y) > 0.0)) {
      fail(ErrorKind::InvalidArgument, "profile: f must be positive on the interval (f(" + format_number(y) + ") <= 0)");
    }
  }
}

void ProfileCurve::require_inside(double y) const {
  // Allow a few ulps so boundary points produced by projection are accepted.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(y0_), std::abs(y1_)});
  if (y < y0_ - slack || y > y1_ + slack || std::isnan(y)) {
    fail(ErrorKind::QueryOutsideProfileInterval,
         "y = " + format_number(y) + " outside [" + format_number(y0_) + ", " + format_number(y1_) + "]");
  }
}

double ProfileCurve::f(double y) const {
  require_inside(y);
  switch (family_) {
    case Family::Sphere: return std::sqrt(params_[0] * params_[0] - y * y);
    case Family::Catenoid: return params_[0] * std::cosh(y / params_[0]);
    case Family::Cone: return params_[0] + params_[1] * y;
    case Family::Cylinder: return params_[0];
    case Family::Sampled: return spline_.value(y);
  }
  return 0.0;
}

double ProfileCurve::df(double y) const {
  require_inside(y);
  switch (family_) {
    case Family::Sphere: return -y / std::sqrt(params_[0] * params_[0] - y * y);
    case Family::Catenoid: return std::sinh(y / params_[0]);
    case Family::Cone: return params_[1];
    case Family::Cylinder: return 0.0;
    case Family::Sampled: return spline_.derivative(y);
  }
  return 0.0;
}

double ProfileCurve::d2f(double y) const {
  require_inside(y);
  switch (family_) {
    case Family::Sphere: {
      const double r2 = params_[0] * params_[0];
      const double s = std::sqrt(r2 - y * y);
      return -r2 / (s * s * s);
    }
    case Family::Catenoid: return std::cosh(y / params_[0]) / params_[0];
    case Family::Cone: return 0.0;
    case Family::Cylinder: return 0.0;
    case Family::Sampled: return spline_.second_derivative(y);
  }
  return 0.0;
}

std::string to_string(ProfileCurve::Family family) {
  switch (family) {
    case ProfileCurve::Family::Sphere: return "sphere";
    case ProfileCurve::Family::Catenoid: return "catenoid";
    case ProfileCurve::Family::Cone: return "cone";
    case ProfileCurve::Family::Cylinder: return "cylinder";
    case ProfileCurve::Family::Sampled: return "sampled";
  }
  return "unknown";
}

// ------------------------------------------------------------- EllipsoidSpec

void EllipsoidSpec::validate() const {
  if (!(b > 0.0) || !(a >= b)) fail(ErrorKind::InvalidArgument, "ellipsoid: require a >= b > 0");
}

// ------------------------------------------------------------ LevelSetDomain

LevelSetDomain::LevelSetDomain(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const Ball&) {},
                 [](const QuadricSpec& q) { q.validate(); },
                 [](const ProfileCurve&) {},
                 [](const EllipsoidSpec& e) { e.validate(); },
                 [](const CustomField& f) {
                   if (!f.value || !f.gradient || !f.hessian) {
                     fail(ErrorKind::InvalidArgument, "custom field needs value, gradient and hessian");
                   }
                 },
             },
             kind_);
}

std::string LevelSetDomain::name() const {
  return std::visit(Overloaded{
                        [](const Ball&) { return std::string("ball"); },
                        [](const QuadricSpec&) { return std::string("quadric"); },
                        [](const ProfileCurve& p) { return "profile:" + to_string(p.family()); },
                        [](const EllipsoidSpec&) { return std::string("ellipsoid"); },
                        [](const CustomField& f) { return "custom:" + f.name; },
                    },
                    kind_);
}

FieldSample LevelSetDomain::evaluate(const Vec3& p) const {
  return std::visit(
      Overloaded{
          [&](const Ball&) {
            return FieldSample{p.squaredNorm(), 2.0 * p, 2.0 * Mat3::Identity()};
          },
          [&](const QuadricSpec& q) {
            if (q.n != kAmbientDim) {
              fail(ErrorKind::InvalidArgument, "quadric evaluation needs n = 3 (got n = " + std::to_string(q.n) + ")");
            }
            FieldSample s;
            s.value = q.c + q.b * p[2];
            for (int i = 0; i < 3; ++i) {
              s.value += q.a[i] * p[i] * p[i];
              s.grad[i] = 2.0 * q.a[i] * p[i];
              s.hess(i, i) = 2.0 * q.a[i];
            }
            s.grad[2] += q.b;
            return s;
          },
          [&](const ProfileCurve& prof) {
            const double y = p[2];
            const double f = prof.f(y);
            const double df = prof.df(y);
            const double d2f = prof.d2f(y);
            FieldSample s;
            s.value = p[0] * p[0] + p[1] * p[1] - f * f + 1.0;
            s.grad = Vec3(2.0 * p[0], 2.0 * p[1], -2.0 * f * df);
            s.hess.diagonal() = Vec3(2.0, 2.0, -2.0 * (df * df + f * d2f));
            return s;
          },
          [&](const EllipsoidSpec& e) {
            const Vec3 w(1.0 / (e.a * e.a), 1.0 / (e.a * e.a), 1.0 / (e.b * e.b));
            FieldSample s;
            s.value = w.dot(p.cwiseProduct(p));
            s.grad = 2.0 * w.cwiseProduct(p);
            s.hess.diagonal() = 2.0 * w;
            return s;
          },
          [&](const CustomField& f) {
            return FieldSample{f.value(p), f.gradient(p), f.hessian(p)};
          },
      },
      kind_);
}

Vec3 LevelSetDomain::outward_normal(const Vec3& p, double min_gradient) const {
  const Vec3 g = gradient(p);
  const double norm = g.norm();
  if (!(norm >= min_gradient)) {
    fail(ErrorKind::DegenerateGradient, "|grad F| = " + format_number(norm) + " at a boundary point");
  }
  return g / norm;
}

Vec3 project_to_boundary(const LevelSetDomain& domain, const Vec3& p, const ProjectionOptions& options) {
  Vec3 q = p;
  for (int it = 0; it <= options.max_iterations; ++it) {
    const FieldSample s = domain.evaluate(q);
    const double residual = s.value - 1.0;
    if (std::abs(residual) <= options.tolerance) return q;
    if (it == options.max_iterations) break;
    const double g2 = s.grad.squaredNorm();
    if (!(std::sqrt(g2) >= options.min_gradient)) {
      fail(ErrorKind::DegenerateGradient, "vanishing gradient during projection");
    }
    q -= (residual / g2) * s.grad;
    if (!q.allFinite()) break;
  }
  std::ostringstream msg;
  msg << "no convergence after " << options.max_iterations << " Newton steps from (" << p.transpose() << ")";
  fail(ErrorKind::ProjectionDiverged, msg.str());
}

// ---------------------------------------------------------------- classifier

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::NoExistence: return "NoExistence";
    case Outcome::OnlyTotallyGeodesic: return "OnlyTotallyGeodesic";
    case Outcome::Unconstrained: return "Unconstrained";
  }
  return "Unknown";
}

Verdict classify_quadric(const QuadricSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const int an = spec.a[n - 1];

  if (an == 0 && spec.b != 0.0) {
    return {Outcome::NoExistence, "a_n = 0 and b != 0: dF/dx_n = b has a fixed sign", kCiteBneq0};
  }

  if (spec.b == 0.0 && spec.c <= 0.0) {
    const auto not_one = std::count_if(spec.a.begin(), spec.a.end(), [](int v) { return v != 1; });
    if (not_one == 1) {
      const int odd = *std::find_if(spec.a.begin(), spec.a.end(), [](int v) { return v != 1; });
      if (odd == -1) return {Outcome::OnlyTotallyGeodesic, "flat disk supported at the origin", kCiteAllOne};
      return {Outcome::OnlyTotallyGeodesic, "flat disks intersecting ∂Ω orthogonally", kCiteAllOne};
    }
    if (not_one >= 2) {
      return {Outcome::NoExistence, "b = 0, c <= 0 and two or more coefficients differ from 1", kCiteAllOne};
    }
    return {Outcome::Unconstrained, "all coefficients equal 1 (a round sphere); no theorem applies", "none"};
  }

  if (spec.b == 0.0 && spec.c >= 1.0 && an == -1) {
    const auto head_ones = std::count(spec.a.begin(), spec.a.end() - 1, 1);
    const auto head_zeros = std::count(spec.a.begin(), spec.a.end() - 1, 0);
    if (head_ones == n - 1) {
      return {Outcome::NoExistence, "cone or hyperboloid of two sheets (c >= 1)", kCiteTwoSheets};
    }
    if (head_zeros == 1 && head_ones == n - 2) {
      return {Outcome::NoExistence, "cylinder over a cone or hyperbola (c >= 1)", kCiteCylinderCone};
    }
  }

  return {Outcome::Unconstrained, "no theorem forbids or pins down a free-boundary minimal hypersurface", "none"};
}

Verdict classify_profile(const ProfileCurve& profile, const ProfileClassifyOptions& options) {
  const int samples = std::max(options.samples, 2);
  const double y0 = profile.y0();
  const double y1 = profile.y1();
  const double dy = (y1 - y0) / (samples - 1);

  // The catenoid is symmetric about its waist, so the f' >= 0 argument on
  // each half leaves only the disk at the waist.
  if (profile.family() == ProfileCurve::Family::Catenoid && y0 <= 0.0 && y1 >= 0.0) {
    return {Outcome::OnlyTotallyGeodesic, "catenoid: flat disk supported at the origin", kCiteRotational};
  }

  double min_df = std::numeric_limits<double>::infinity();
  double max_df = -min_df;
  for (int k = 0; k < samples; ++k) {
    const double y = k + 1 == samples ? y1 : y0 + dy * k;
    min_df = std::min(min_df, profile.df(y));
    max_df = std::max(max_df, profile.df(y));
  }
  if (min_df < -options.tolerance && max_df > options.tolerance) {
    return {Outcome::Unconstrained, "f' changes sign; no theorem applies", "none"};
  }
  // f' <= 0 is the mirror image y -> -y of f' >= 0.
  const double sign = min_df < -options.tolerance ? -1.0 : 1.0;
  auto slope = [&](double y) { return sign * profile.df(y); };

  double best = std::numeric_limits<double>::infinity();
  int argmin = 0;
  for (int k = 0; k < samples; ++k) {
    const double d = slope(k + 1 == samples ? y1 : y0 + dy * k);
    if (d < best) {
      best = d;
      argmin = k;
    }
  }

  // Sharpen the smallest value by golden-section search in the neighbouring
  // cells so interior zeros between samples are found.
  double best_y = y0 + dy * argmin;
  {
    double lo = std::max(y0, best_y - dy);
    double hi = std::min(y1, best_y + dy);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - phi * (hi - lo);
    double d = lo + phi * (hi - lo);
    double fc = slope(c);
    double fd = slope(d);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - phi * (hi - lo);
        fc = slope(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + phi * (hi - lo);
        fd = slope(d);
      }
    }
    const double y_mid = 0.5 * (lo + hi);
    const double f_mid = slope(y_mid);
    if (f_mid < best) {
      best = f_mid;
      best_y = y_mid;
    }
  }

  if (std::abs(best) < options.tolerance) {
    const double where = std::abs(best_y) <= 1e-9 * std::max(1.0, y1 - y0) ? 0.0 : best_y;
    if (where == 0.0) return {Outcome::OnlyTotallyGeodesic, "flat disk supported at the origin", kCiteRotational};
    return {Outcome::OnlyTotallyGeodesic, "flat disk supported at the plane x3 = " + format_number(where),
            kCiteRotational};
  }
  return {Outcome::NoExistence, "f' has a fixed sign on the whole profile, so no level with f' = 0 exists",
          kCiteRotational};
}

Verdict classify(const LevelSetDomain& domain) {
  return std::visit(Overloaded{
                        [](const Ball&) { return classify_quadric(QuadricSpec{3, {1, 1, 1}, 0.0, 0.0}); },
                        [](const QuadricSpec& q) { return classify_quadric(q); },
                        [](const ProfileCurve& p) { return classify_profile(p); },
                        [](const EllipsoidSpec&) {
                          return Verdict{Outcome::Unconstrained, "ellipsoid: no existence theorem applies", "none"};
                        },
                        [](const CustomField&) {
                          return Verdict{Outcome::Unconstrained, "custom field: no existence theorem applies", "none"};
                        },
                    },
                    domain.kind());
}

}  // namespace fbms
