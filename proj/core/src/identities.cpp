#include "fbms/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fbms/error.hpp"
#include "fbms/solver.hpp"

namespace fbms {

namespace {

constexpr double kRoundOff = 1e-12;

QuadricSpec quadric_of(const LevelSetDomain& domain, const char* identity) {
  if (domain.as<Ball>()) return {3, {1, 1, 1}, 0.0, 0.0};
  if (const auto* q = domain.as<QuadricSpec>()) {
    if (q->n != 3) fail(ErrorKind::InvalidArgument, std::string(identity) + ": quadric must live in R^3");
    return *q;
  }
  fail(ErrorKind::InvalidArgument, std::string(identity) + " needs a quadric domain, got " + domain.name());
}

bool is_unit_ball(const LevelSetDomain& domain) {
  if (domain.as<Ball>()) return true;
  const auto* q = domain.as<QuadricSpec>();
  return q && q->n == 3 && q->a == std::vector<int>{1, 1, 1} && q->b == 0.0 && q->c == 0.0;
}

/// Constant c with <grad F, x> = k (F - c), for the domains where F is
/// k-homogeneous up to an additive constant.
double homogeneity_constant(const LevelSetDomain& domain, int k) {
  if (k != 2) fail(ErrorKind::InvalidArgument, "homogeneous: supported domains are 2-homogeneous, got k = " + std::to_string(k));
  if (domain.as<Ball>() || domain.as<EllipsoidSpec>()) return 0.0;
  if (const auto* q = domain.as<QuadricSpec>()) {
    if (q->b != 0.0) fail(ErrorKind::InvalidArgument, "homogeneous: quadric with b != 0 is not homogeneous");
    return q->c;
  }
  if (const auto* p = domain.as<ProfileCurve>()) {
    if (p->family() == ProfileCurve::Family::Cylinder) {
      const double r = p->parameters()[0];
      return 1.0 - r * r;
    }
  }
  fail(ErrorKind::InvalidArgument, "homogeneous: " + domain.name() + " is not homogeneous");
}

double sum_boundary(const TriMesh& mesh, const DiscreteGeometry& geom, const std::function<double(int)>& f,
                    double* magnitude) {
  double total = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto vi = static_cast<std::size_t>(v);
    if (!geom.is_boundary[vi]) continue;
    const double value = f(v) * geom.line_element[vi];
    total += value;
    if (magnitude) *magnitude += std::abs(value);
  }
  return total;
}

double sum_surface(const TriMesh& mesh, const DiscreteGeometry& geom, const std::function<double(int)>& f,
                   double* magnitude) {
  double total = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double value = f(v) * geom.vertex_area[static_cast<std::size_t>(v)];
    total += value;
    if (magnitude) *magnitude += std::abs(value);
  }
  return total;
}

std::vector<double> sample(const TriMesh& mesh, const std::function<double(const Vec3&)>& f) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(mesh.num_vertices()));
  for (const Vec3& p : mesh.positions()) out.push_back(f(p));
  return out;
}

void finish(IdentityLevel& level) {
  const double sides = std::max(std::abs(level.lhs), std::abs(level.rhs));
  if (sides > 1e-6 * level.magnitude && sides > 0.0) {
    level.relative_residual = level.residual / sides;
  } else if (level.magnitude > 0.0) {
    level.relative_residual = level.residual / level.magnitude;
  } else {
    level.relative_residual = 0.0;
  }
}

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  for (int i = index; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

}  // namespace

std::string to_string(TestFunction phi) {
  switch (phi) {
    case TestFunction::One: return "1";
    case TestFunction::X1: return "x1";
    case TestFunction::X2: return "x2";
    case TestFunction::X3: return "x3";
    case TestFunction::NormSq: return "|x|^2";
    case TestFunction::X1X2: return "x1x2";
  }
  return "?";
}

TestFunction parse_test_function(const std::string& name) {
  if (name == "1" || name == "one") return TestFunction::One;
  if (name == "x1") return TestFunction::X1;
  if (name == "x2") return TestFunction::X2;
  if (name == "x3") return TestFunction::X3;
  if (name == "|x|^2" || name == "normsq" || name == "|x|2") return TestFunction::NormSq;
  if (name == "x1x2") return TestFunction::X1X2;
  fail(ErrorKind::InvalidArgument, "unknown test function \"" + name + "\" (1, x1, x2, x3, |x|^2, x1x2)");
}

double evaluate(TestFunction phi, const Vec3& x) {
  switch (phi) {
    case TestFunction::One: return 1.0;
    case TestFunction::X1: return x.x();
    case TestFunction::X2: return x.y();
    case TestFunction::X3: return x.z();
    case TestFunction::NormSq: return x.squaredNorm();
    case TestFunction::X1X2: return x.x() * x.y();
  }
  return 0.0;
}

bool IdentityKind::requires_minimality() const {
  return tag == Tag::Minkowski || tag == Tag::Homogeneous || tag == Tag::QuadricCombined ||
         tag == Tag::RotationalCombined || tag == Tag::BallHalf;
}

std::string IdentityKind::name() const {
  switch (tag) {
    case Tag::Fundamental: return "fundamental(" + to_string(phi) + ")";
    case Tag::Minkowski: return "minkowski";
    case Tag::Homogeneous: return "homogeneous(k=" + std::to_string(degree) + ")";
    case Tag::QuadricLaplacian: return "quadric-laplacian";
    case Tag::QuadricCombined: return "quadric-combined";
    case Tag::RotationalCombined: return "rotational-combined";
    case Tag::BallHalf: return "ball-half(" + to_string(phi) + ")";
  }
  return "?";
}

IdentityKind parse_identity(const std::string& tag, TestFunction phi, int degree) {
  using T = IdentityKind::Tag;
  if (tag == "fundamental") return {T::Fundamental, phi, degree};
  if (tag == "minkowski") return {T::Minkowski, phi, degree};
  if (tag == "homogeneous") return {T::Homogeneous, phi, degree};
  if (tag == "quadric-laplacian") return {T::QuadricLaplacian, phi, degree};
  if (tag == "quadric-combined") return {T::QuadricCombined, phi, degree};
  if (tag == "rotational-combined") return {T::RotationalCombined, phi, degree};
  if (tag == "ball-half") return {T::BallHalf, phi, degree};
  fail(ErrorKind::InvalidArgument, "unknown identity \"" + tag + "\"");
}

std::vector<double> interior_laplacian(const TriMesh& mesh, const DiscreteGeometry& geom,
                                       const std::vector<double>& values) {
  std::vector<double> lap = laplacian_apply(mesh, geom, values);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto vi = static_cast<std::size_t>(v);
    if (!geom.is_boundary[vi]) continue;
    double sum = 0.0;
    int count = 0;
    for (int u : mesh.neighbors(v)) {
      if (geom.is_boundary[static_cast<std::size_t>(u)]) continue;
      sum += lap[static_cast<std::size_t>(u)];
      ++count;
    }
    lap[vi] = count > 0 ? sum / count : 0.0;
  }
  return lap;
}

std::pair<double, double> fundamental_particular(const TriMesh& mesh, const DiscreteGeometry& geom,
                                                 const LevelSetDomain& domain) {
  std::vector<double> grad_norm(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (geom.is_boundary[static_cast<std::size_t>(v)]) grad_norm[static_cast<std::size_t>(v)] = domain.gradient(mesh.position(v)).norm();
  }
  const std::vector<double> lap_f =
      interior_laplacian(mesh, geom, sample(mesh, [&](const Vec3& x) { return domain.value(x); }));
  return {integrate_boundary(mesh, geom, grad_norm), integrate_surface(mesh, geom, lap_f)};
}

IdentityLevel evaluate_identity(const IdentityKind& kind, const TriMesh& mesh, const DiscreteGeometry& geom,
                                const LevelSetDomain& domain) {
  using T = IdentityKind::Tag;
  IdentityLevel level;
  level.triangles = mesh.num_triangles();
  level.h = mesh.mean_edge_length();
  double mag = 0.0;
  auto x = [&](int v) -> const Vec3& { return mesh.position(v); };

  switch (kind.tag) {
    case T::Fundamental: {
      const auto phi = sample(mesh, [&](const Vec3& p) { return evaluate(kind.phi, p); });
      const auto f = sample(mesh, [&](const Vec3& p) { return domain.value(p); });
      const auto lap_f = interior_laplacian(mesh, geom, f);
      const auto lap_phi = interior_laplacian(mesh, geom, phi);
      level.lhs = sum_boundary(mesh, geom, [&](int v) { return domain.gradient(x(v)).norm() * phi[static_cast<std::size_t>(v)]; }, &mag);
      const double a = sum_surface(mesh, geom, [&](int v) { return phi[static_cast<std::size_t>(v)] * lap_f[static_cast<std::size_t>(v)]; }, &mag);
      const double b = sum_surface(mesh, geom, [&](int v) { return (1.0 - f[static_cast<std::size_t>(v)]) * lap_phi[static_cast<std::size_t>(v)]; }, &mag);
      level.rhs = a + b;
      break;
    }
    case T::Minkowski:
      level.lhs = sum_boundary(mesh, geom, [&](int v) { return x(v).dot(domain.outward_normal(x(v))); }, &mag);
      level.rhs = 2.0 * sum_surface(mesh, geom, [](int) { return 1.0; }, &mag);
      break;
    case T::Homogeneous: {
      const double c = homogeneity_constant(domain, kind.degree);
      level.lhs = sum_boundary(mesh, geom, [&](int v) { return kind.degree * (1.0 - c) / domain.gradient(x(v)).norm(); }, &mag);
      level.rhs = 2.0 * sum_surface(mesh, geom, [](int) { return 1.0; }, &mag);
      break;
    }
    case T::QuadricLaplacian: {
      const QuadricSpec q = quadric_of(domain, "quadric-laplacian");
      const auto lap_f = laplacian_apply(mesh, geom, sample(mesh, [&](const Vec3& p) { return domain.value(p); }));
      double max_err = 0.0, scale = 0.0;
      for (int v = 0; v < mesh.num_vertices(); ++v) {
        const auto vi = static_cast<std::size_t>(v);
        if (geom.is_boundary[vi]) continue;
        double closed = 0.0;
        for (int i = 0; i < 3; ++i) closed += 2.0 * q.a[static_cast<std::size_t>(i)] * (1.0 - geom.normal[vi][i] * geom.normal[vi][i]);
        max_err = std::max(max_err, std::abs(lap_f[vi] - closed));
        scale = std::max({scale, std::abs(closed), std::abs(lap_f[vi])});
        level.lhs += lap_f[vi] * geom.vertex_area[vi];
        level.rhs += closed * geom.vertex_area[vi];
        mag += std::abs(closed) * geom.vertex_area[vi];
      }
      level.residual = max_err;
      level.magnitude = mag;
      level.relative_residual = scale > 0.0 ? max_err / scale : 0.0;
      return level;
    }
    case T::QuadricCombined: {
      const QuadricSpec q = quadric_of(domain, "quadric-combined");
      level.lhs = sum_boundary(mesh, geom, [&](int v) {
        const Vec3 g = domain.gradient(x(v));
        return (g.squaredNorm() + q.b * x(v).z() - 2.0 * (1.0 - q.c)) / g.norm();
      }, &mag);
      level.rhs = sum_surface(mesh, geom, [&](int v) {
        const Vec3& n = geom.normal[static_cast<std::size_t>(v)];
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += 2.0 * q.a[static_cast<std::size_t>(i)] * (1.0 - n[i] * n[i]);
        return s - 2.0;
      }, &mag);
      break;
    }
    case T::RotationalCombined: {
      const auto* profile = domain.as<ProfileCurve>();
      if (!profile) fail(ErrorKind::InvalidArgument, "rotational-combined needs a rotational (profile) domain, got " + domain.name());
      // The magnitude sums the terms separately: on the sphere profile each
      // side cancels identically and only the individual terms set a scale.
      level.lhs = sum_boundary(mesh, geom, [&](int v) {
        const double y = x(v).z();
        const double f = profile->f(y), df = profile->df(y);
        return (f * df * df + y * df) / std::sqrt(1.0 + df * df);
      }, nullptr);
      mag += sum_boundary(mesh, geom, [&](int v) {
        const double y = x(v).z();
        const double f = profile->f(y), df = profile->df(y);
        return (std::abs(f * df * df) + std::abs(y * df)) / std::sqrt(1.0 + df * df);
      }, nullptr);
      level.rhs = sum_surface(mesh, geom, [&](int v) {
        const double y = x(v).z();
        const double f = profile->f(y), df = profile->df(y), d2f = profile->d2f(y);
        const double n3 = geom.normal[static_cast<std::size_t>(v)].z();
        return (n3 * n3 - 1.0) * (df * df + f * d2f + 1.0);
      }, nullptr);
      mag += sum_surface(mesh, geom, [&](int v) {
        const double y = x(v).z();
        const double f = profile->f(y), df = profile->df(y), d2f = profile->d2f(y);
        const double n3 = geom.normal[static_cast<std::size_t>(v)].z();
        return (1.0 - n3 * n3) * (df * df + std::abs(f * d2f) + 1.0);
      }, nullptr);
      break;
    }
    case T::BallHalf: {
      if (!is_unit_ball(domain)) fail(ErrorKind::InvalidArgument, "ball-half applies to the unit ball only, got " + domain.name());
      const auto phi = sample(mesh, [&](const Vec3& p) { return evaluate(kind.phi, p); });
      const auto lap_phi = interior_laplacian(mesh, geom, phi);
      level.lhs = sum_boundary(mesh, geom, [&](int v) { return phi[static_cast<std::size_t>(v)]; }, &mag);
      const double a = 2.0 * sum_surface(mesh, geom, [&](int v) { return phi[static_cast<std::size_t>(v)]; }, &mag);
      const double b = 0.5 * sum_surface(mesh, geom, [&](int v) {
        return (1.0 - x(v).squaredNorm()) * lap_phi[static_cast<std::size_t>(v)];
      }, &mag);
      level.rhs = a + b;
      break;
    }
  }
  level.residual = std::abs(level.lhs - level.rhs);
  level.magnitude = mag;
  finish(level);
  return level;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

IdentityReport check_identity(const IdentityKind& kind, const TriMesh& mesh, const LevelSetDomain& domain,
                              const IdentityOptions& options) {
  if (options.levels < 1) fail(ErrorKind::InvalidArgument, "identity check needs at least one level");
  IdentityReport report;
  report.kind = kind;
  report.minimality_residual = stationarity_residuals(mesh, domain).residual_H;
  if (kind.requires_minimality() && !(report.minimality_residual <= options.minimality_threshold)) {
    report.hypothesis_met = false;
    report.hypothesis_message = "minimality hypothesis unmet: max |H| * diameter = " +
                                std::to_string(report.minimality_residual) + " exceeds " +
                                std::to_string(options.minimality_threshold);
  }

  const Refiner refiner = options.refiner ? options.refiner : Refiner([&domain](const TriMesh& m, int) {
    return refine(m, &domain);
  });
  TriMesh current = mesh;
  for (int l = 0; l < options.levels; ++l) {
    if (l > 0) current = refiner(current, l);
    const DiscreteGeometry geom = compute_geometry(current);
    report.levels.push_back(evaluate_identity(kind, current, geom, domain));
  }

  report.exact = std::all_of(report.levels.begin(), report.levels.end(), [](const IdentityLevel& lv) {
    const double scale = std::max({lv.magnitude, std::abs(lv.lhs), std::abs(lv.rhs)});
    return lv.residual <= kRoundOff * scale;
  });
  if (!report.exact && report.levels.size() >= 3) {
    std::vector<double> hs, rs;
    for (const auto& lv : report.levels) {
      hs.push_back(lv.h);
      rs.push_back(lv.relative_residual);
    }
    report.estimated_order = loglog_slope(hs, rs);
  }
  return report;
}

std::string to_string(SignPattern pattern) {
  switch (pattern) {
    case SignPattern::Positive: return "positive";
    case SignPattern::Negative: return "negative";
    case SignPattern::NonNegative: return "nonnegative";
    case SignPattern::NonPositive: return "nonpositive";
    case SignPattern::Zero: return "zero";
    case SignPattern::Mixed: return "mixed";
  }
  return "?";
}

SignatureReport signature_scan(const LevelSetDomain& domain, const SignatureOptions& options) {
  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(options.samples));
  if (const auto* profile = domain.as<ProfileCurve>()) {
    for (int i = 1; points.size() < static_cast<std::size_t>(options.samples); ++i) {
      const double theta = 2.0 * std::numbers::pi * halton(i, 2);
      const double y = profile->y0() + (profile->y1() - profile->y0()) * halton(i, 3);
      const double r = profile->f(y);
      points.emplace_back(r * std::cos(theta), r * std::sin(theta), y);
    }
  } else {
    const int max_seeds = 20 * options.samples;
    for (int i = 1; i <= max_seeds && points.size() < static_cast<std::size_t>(options.samples); ++i) {
      const Vec3 seed = options.box * Vec3(2.0 * halton(i, 2) - 1.0, 2.0 * halton(i, 3) - 1.0, 2.0 * halton(i, 5) - 1.0);
      try {
        points.push_back(project_to_boundary(domain, seed));
      } catch (const Error&) {
        // Seeds on the critical set of F, or that run away, are skipped.
      }
    }
  }

  SignatureReport report;
  report.samples = static_cast<int>(points.size());
  std::vector<Vec3> dirs = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  for (const Vec3& d : options.extra_directions) dirs.push_back(d.normalized());

  std::vector<Vec3> grads;
  grads.reserve(points.size());
  double scale = 0.0;
  for (const Vec3& p : points) {
    grads.push_back(domain.gradient(p));
    scale = std::max(scale, grads.back().norm());
  }
  const double tol = 1e-12 * std::max(scale, 1.0);

  bool none = false, planar = false;
  for (const Vec3& d : dirs) {
    DirectionSign s;
    s.direction = d;
    s.min = points.empty() ? 0.0 : 1e300;
    s.max = points.empty() ? 0.0 : -1e300;
    for (const Vec3& g : grads) {
      const double v = g.dot(d);
      s.min = std::min(s.min, v);
      s.max = std::max(s.max, v);
    }
    if (s.min > tol) {
      s.pattern = SignPattern::Positive;
    } else if (s.max < -tol) {
      s.pattern = SignPattern::Negative;
    } else if (s.min >= -tol && s.max <= tol) {
      s.pattern = SignPattern::Zero;
    } else if (s.min >= -tol) {
      s.pattern = SignPattern::NonNegative;
    } else if (s.max <= tol) {
      s.pattern = SignPattern::NonPositive;
    } else {
      s.pattern = SignPattern::Mixed;
    }
    switch (s.pattern) {
      case SignPattern::Positive:
      case SignPattern::Negative:
        s.conclusion = "no free-boundary minimal hypersurface";
        none = true;
        break;
      case SignPattern::NonNegative:
      case SignPattern::NonPositive:
      case SignPattern::Zero:
        s.conclusion = "totally geodesic: contained in a plane orthogonal to v";
        planar = true;
        break;
      case SignPattern::Mixed: s.conclusion = "no conclusion"; break;
    }
    report.directions.push_back(s);
  }
  report.conclusion = none ? "no free-boundary minimal hypersurface"
                           : (planar ? "totally geodesic: contained in a plane orthogonal to v" : "no conclusion");
  return report;
}

}  // namespace fbms
