#include "fbms/error.hpp"

namespace fbms {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::QueryOutsideProfileInterval: return "QueryOutsideProfileInterval";
    case ErrorKind::DegenerateGradient: return "DegenerateGradient";
    case ErrorKind::ProjectionDiverged: return "ProjectionDiverged";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonTriangularFace: return "NonTriangularFace";
    case ErrorKind::Io: return "Io";
    case ErrorKind::InsufficientNeighborhood: return "InsufficientNeighborhood";
    case ErrorKind::TangentProjectionDegenerate: return "TangentProjectionDegenerate";
    case ErrorKind::MeshDegenerated: return "MeshDegenerated";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace fbms
