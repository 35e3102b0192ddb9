#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbms {

enum class ErrorKind {
  InvalidArgument,
  QueryOutsideProfileInterval,
  DegenerateGradient,
  ProjectionDiverged,
  ParseError,
  NonTriangularFace,
  Io,
  InsufficientNeighborhood,
  TangentProjectionDegenerate,
  MeshDegenerated,
  HypothesisUnmet,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit code without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace fbms
