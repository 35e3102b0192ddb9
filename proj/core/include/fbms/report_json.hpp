#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fbms/gap.hpp"
#include "fbms/identities.hpp"
#include "fbms/solver.hpp"

namespace fbms {

nlohmann::json to_json(const SolveReport& report, bool include_trace = true);
nlohmann::json to_json(const IdentityReport& report);
nlohmann::json to_json(const GapReport& report, bool include_values = false);
nlohmann::json to_json(const SignatureReport& report);

/// One row per refinement level: level,triangles,h,lhs,rhs,residual,relative_residual.
void write_identity_csv(const IdentityReport& report, std::ostream& out);
/// vertex,value
void write_gap_csv(const GapReport& report, std::ostream& out);

/// Library version string (the CMake project version).
std::string version();

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  nlohmann::json domain;
  nlohmann::json config = nlohmann::json::object();
  std::string output_dir;
  double wall_time_seconds = 0.0;
  int exit_code = 0;
};

nlohmann::json to_json(const RunManifest& manifest);

}  // namespace fbms
