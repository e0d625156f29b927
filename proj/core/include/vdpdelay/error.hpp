#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vdpdelay {

enum class ErrorCode {
  ModeNonexistent,
  OutOfDomain,
  NotAHopf,
  UnsupportedMode,
  NoConvergence,
  SingularJacobian,
  DegenerateHopf,
  NonFiniteState,
  TooShort,
  NoSignChange,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Numerical or domain failure raised by the library. The code identifies the
/// failure class; the message carries the offending values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vdpdelay
