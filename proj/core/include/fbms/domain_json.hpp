#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "fbms/domains.hpp"

namespace fbms {

/// Domain documents:
///   {"kind":"ball"}
///   {"kind":"quadric","n":3,"a":[1,1,-1],"b":0,"c":0}   ("kind" and "n" optional)
///   {"kind":"ellipsoid","a":2,"b":1}
///   {"kind":"profile","family":"sphere","radius":1,"y0":-0.9,"y1":0.9}
///   {"kind":"profile","family":"sampled","y":[...],"f":[...]}
/// Throws ParseError on malformed documents.
LevelSetDomain domain_from_json(const nlohmann::json& doc);
nlohmann::json domain_to_json(const LevelSetDomain& domain);

LevelSetDomain load_domain(const std::filesystem::path& path);

nlohmann::json verdict_to_json(const Verdict& verdict);

}  // namespace fbms
