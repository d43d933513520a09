#pragma once

#include <stdexcept>
#include <string>

namespace splap {

// Input/configuration rejected before any compute. The message names the
// violated rule.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A solver failed to meet its stopping criteria (diagnostics in the message).
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace splap
