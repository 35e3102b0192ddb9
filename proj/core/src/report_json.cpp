#include "fbms/report_json.hpp"

#include <ostream>

namespace fbms {

using nlohmann::json;

namespace {

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const SolveReport& report, bool include_trace) {
  json j = {{"iterations", report.iterations},
            {"final_area", report.final_area},
            {"residual_H", report.residual_H},
            {"residual_angle", report.residual_angle},
            {"converged", report.converged},
            {"final_step", report.final_step},
            {"last_displacement", report.last_displacement},
            {"rejected_steps", report.rejected_steps}};
  if (include_trace) j["energy_trace"] = report.energy_trace;
  return j;
}

json to_json(const IdentityReport& report) {
  json levels = json::array();
  for (const IdentityLevel& l : report.levels) {
    levels.push_back({{"triangles", l.triangles},
                      {"h", l.h},
                      {"lhs", l.lhs},
                      {"rhs", l.rhs},
                      {"residual", l.residual},
                      {"relative_residual", l.relative_residual},
                      {"magnitude", l.magnitude}});
  }
  return {{"identity", report.kind.name()},
          {"levels", levels},
          {"estimated_order", optional_number(report.estimated_order)},
          {"exact", report.exact},
          {"hypothesis_met", report.hypothesis_met},
          {"hypothesis_message", report.hypothesis_message},
          {"minimality_residual", report.minimality_residual}};
}

json to_json(const GapReport& report, bool include_values) {
  json loops = json::array();
  for (const LoopRecord& r : report.per_loop) {
    loops.push_back({{"loop", r.loop},
                     {"vertices", r.vertices},
                     {"dependence_defect", r.dependence_defect},
                     {"lambda_mean", r.lambda_mean},
                     {"lambda_spread", r.lambda_spread},
                     {"gradient_mismatch", r.gradient_mismatch},
                     {"tau_mean", r.tau_mean},
                     {"tau_spread", r.tau_spread},
                     {"lem1_error", r.lem1_error},
                     {"mean_curvature_residual", r.mean_curvature_residual},
                     {"min_x_tangent", r.min_x_tangent},
                     {"min_geodesic_curvature", r.min_geodesic_curvature},
                     {"rotational_compatible", r.rotational_compatible}});
  }
  json j = {{"kind", to_string(report.kind)},
            {"max_value", report.max_value},
            {"bound", report.bound},
            {"hypothesis_satisfied", report.hypothesis_satisfied},
            {"witness_vertex", report.witness},
            {"per_loop", loops},
            {"metrics", report.metrics},
            {"labels", report.labels}};
  if (include_values) j["values"] = report.values;
  return j;
}

json to_json(const SignatureReport& report) {
  json dirs = json::array();
  for (const DirectionSign& d : report.directions) {
    dirs.push_back({{"direction", vec(d.direction)},
                    {"pattern", to_string(d.pattern)},
                    {"min", d.min},
                    {"max", d.max},
                    {"conclusion", d.conclusion}});
  }
  return {{"samples", report.samples}, {"directions", dirs}, {"conclusion", report.conclusion}};
}

void write_identity_csv(const IdentityReport& report, std::ostream& out) {
  out << "level,triangles,h,lhs,rhs,residual,relative_residual\n";
  out.precision(17);
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const IdentityLevel& l = report.levels[i];
    out << i << ',' << l.triangles << ',' << l.h << ',' << l.lhs << ',' << l.rhs << ',' << l.residual << ','
        << l.relative_residual << '\n';
  }
}

void write_gap_csv(const GapReport& report, std::ostream& out) {
  out << "vertex,value\n";
  out.precision(17);
  for (std::size_t v = 0; v < report.values.size(); ++v) out << v << ',' << report.values[v] << '\n';
}

std::string version() { return FBMS_VERSION; }

json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"inputs", m.inputs},
          {"domain", m.domain},
          {"config", m.config},
          {"output_dir", m.output_dir},
          {"tool_version", version()},
          {"wall_time_seconds", m.wall_time_seconds},
          {"exit_code", m.exit_code}};
}

}  // namespace fbms
