#pragma once

#include <iosfwd>

#include "fbms/error.hpp"

namespace fbms::cli {

/// Exit codes of the fbms tool.
enum ExitCode : int { Ok = 0, InputError = 2, HypothesisOrConvergence = 3, NumericalFailure = 4 };

int exit_code_for(ErrorKind kind);

/// Entry point of `fbms classify | solve | verify | gap | reference`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fbms::cli
