#pragma once

#include <numbers>

namespace vdpdelay {

/// Sign of the delayed coupling seen by a decoupled perturbation channel.
/// Symmetric: u = w1 + w2 (beta = +1). Antisymmetric: u = w1 - w2 (beta = -1).
enum class ModeSign : int { Symmetric = +1, Antisymmetric = -1 };

constexpr double sign_value(ModeSign s) noexcept {
  return static_cast<int>(s) > 0 ? 1.0 : -1.0;
}

/// Physical parameters of the delay-coupled van der Pol pair.
struct Params {
  double alpha = 0.0;  // coupling strength
  double T = 0.0;      // delay, in fast time
  double eps = 0.0;    // small parameter
  ModeSign beta = ModeSign::Antisymmetric;

  /// Throws Error(OutOfDomain) unless eps >= 0, T >= 0 and all fields finite.
  void validate() const;
};

inline constexpr double kPi = std::numbers::pi;

/// Left end of the coupling range where the Hopf frequency is real (sqrt(2)/3).
inline constexpr double kAlphaHopfMin = std::numbers::sqrt2 / 3.0;

}  // namespace vdpdelay
