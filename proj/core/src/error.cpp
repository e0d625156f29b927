#include "vdpdelay/error.hpp"

namespace vdpdelay {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ModeNonexistent: return "ModeNonexistent";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NotAHopf: return "NotAHopf";
    case ErrorCode::UnsupportedMode: return "UnsupportedMode";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::DegenerateHopf: return "DegenerateHopf";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NoSignChange: return "NoSignChange";
  }
  return "Unknown";
}

}  // namespace vdpdelay
