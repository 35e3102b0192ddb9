#include "fbms/domain_json.hpp"

#include <fstream>

#include "fbms/error.hpp"

namespace fbms {

using nlohmann::json;

namespace {

double number(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number()) {
    fail(ErrorKind::ParseError, std::string("domain: missing numeric field \"") + key + "\"");
  }
  return doc.at(key).get<double>();
}

double number_or(const json& doc, const char* key, double fallback) {
  return doc.contains(key) ? number(doc, key) : fallback;
}

std::vector<double> number_array(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    fail(ErrorKind::ParseError, std::string("domain: missing array field \"") + key + "\"");
  }
  std::vector<double> out;
  for (const auto& v : doc.at(key)) {
    if (!v.is_number()) fail(ErrorKind::ParseError, std::string("domain: non-numeric entry in \"") + key + "\"");
    out.push_back(v.get<double>());
  }
  return out;
}

LevelSetDomain quadric_from_json(const json& doc) {
  QuadricSpec spec;
  if (!doc.contains("a") || !doc.at("a").is_array()) fail(ErrorKind::ParseError, "quadric: missing array \"a\"");
  for (const auto& v : doc.at("a")) {
    if (!v.is_number_integer()) fail(ErrorKind::ParseError, "quadric: coefficients of \"a\" must be integers");
    spec.a.push_back(v.get<int>());
  }
  spec.n = doc.contains("n") ? static_cast<int>(number(doc, "n")) : static_cast<int>(spec.a.size());
  spec.b = number_or(doc, "b", 0.0);
  spec.c = number_or(doc, "c", 0.0);
  return LevelSetDomain::quadric(std::move(spec));
}

LevelSetDomain profile_from_json(const json& doc) {
  const std::string family = doc.value("family", std::string());
  if (family == "sampled") {
    return LevelSetDomain::rotational(ProfileCurve::sampled(number_array(doc, "y"), number_array(doc, "f")));
  }
  const double y0 = number(doc, "y0");
  const double y1 = number(doc, "y1");
  if (family == "sphere") return LevelSetDomain::rotational(ProfileCurve::sphere(number_or(doc, "radius", 1.0), y0, y1));
  if (family == "catenoid") {
    return LevelSetDomain::rotational(ProfileCurve::catenoid(number_or(doc, "scale", 1.0), y0, y1));
  }
  if (family == "cone") {
    return LevelSetDomain::rotational(ProfileCurve::cone(number_or(doc, "f0", 1.0), number(doc, "slope"), y0, y1));
  }
  if (family == "cylinder") {
    return LevelSetDomain::rotational(ProfileCurve::cylinder(number_or(doc, "radius", 1.0), y0, y1));
  }
  fail(ErrorKind::ParseError, "profile: unknown family \"" + family + "\"");
}

}  // namespace

LevelSetDomain domain_from_json(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::ParseError, "domain: document must be a JSON object");
  std::string kind = doc.value("kind", std::string());
  if (kind.empty() && doc.contains("a") && doc.at("a").is_array()) kind = "quadric";
  try {
    if (kind == "ball") return LevelSetDomain::ball();
    if (kind == "quadric") return quadric_from_json(doc);
    if (kind == "ellipsoid") return LevelSetDomain::ellipsoid({number(doc, "a"), number(doc, "b")});
    if (kind == "profile" || kind == "rotational") return profile_from_json(doc);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) fail(ErrorKind::ParseError, e.what());
    throw;
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, e.what());
  }
  fail(ErrorKind::ParseError, "domain: unknown kind \"" + kind + "\"");
}

json domain_to_json(const LevelSetDomain& domain) {
  if (domain.as<Ball>()) return {{"kind", "ball"}};
  if (const auto* q = domain.as<QuadricSpec>()) return {{"kind", "quadric"}, {"n", q->n}, {"a", q->a}, {"b", q->b}, {"c", q->c}};
  if (const auto* e = domain.as<EllipsoidSpec>()) return {{"kind", "ellipsoid"}, {"a", e->a}, {"b", e->b}};
  if (const auto* p = domain.as<ProfileCurve>()) {
    json out = {{"kind", "profile"}, {"family", to_string(p->family())}};
    const auto& params = p->parameters();
    switch (p->family()) {
      case ProfileCurve::Family::Sphere: out["radius"] = params[0]; break;
      case ProfileCurve::Family::Catenoid: out["scale"] = params[0]; break;
      case ProfileCurve::Family::Cone:
        out["f0"] = params[0];
        out["slope"] = params[1];
        break;
      case ProfileCurve::Family::Cylinder: out["radius"] = params[0]; break;
      case ProfileCurve::Family::Sampled:
        out["y"] = p->spline().knots();
        out["f"] = p->spline().values();
        return out;
    }
    out["y0"] = p->y0();
    out["y1"] = p->y1();
    return out;
  }
  fail(ErrorKind::InvalidArgument, "custom fields have no JSON form");
}

LevelSetDomain load_domain(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open domain file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return domain_from_json(doc);
}

json verdict_to_json(const Verdict& verdict) {
  return {{"outcome", to_string(verdict.outcome)}, {"description", verdict.description}, {"citation", verdict.citation}};
}

}  // namespace fbms
