#pragma once

#include <stdexcept>
#include <string>

namespace lifemax {

enum class ErrorCode {
  InvalidParam,
  ConnectivityFailure,
  ParseError,
  ProtocolViolation,
  DegenerateNode,
  NumericalDivergence,
  Infeasible,
  Unbounded,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the core; the C API maps `code()` onto status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lifemax
