#pragma once

#include <complex>
#include <string_view>

#include "vdpdelay/params.hpp"

namespace vdpdelay {

using Complex = std::complex<double>;

/// Coefficients of the expansions T = T0 + eps T1 + eps^2 T2 and
/// Omega = Omega0 + eps Omega1 + eps^2 Omega2 of the DDE Hopf point.
struct SeriesCoeffs {
  double T0 = 0.0, T1 = 0.0, T2 = 0.0;
  double Omega0 = 0.0, Omega1 = 0.0, Omega2 = 0.0;
};

enum class HopfMethod { SeriesN1, SeriesN2, SeriesN3, Newton, Simulation };

std::string_view to_string(HopfMethod m) noexcept;

/// A located stability boundary of the antisymmetric slow flow.
struct HopfPoint {
  double alpha = 0.0;
  double T = 0.0;
  double Omega = 0.0;
  HopfMethod method = HopfMethod::SeriesN1;
  int iterations = 0;     // Newton only
  double residual = 0.0;  // max(|Re|, |Im|) of char_eq at (T, i Omega), Newton only
};

/// Characteristic function of the DDE slow flow (beta = -1) for exponential
/// solutions e^{lambda eta}, with E = exp(-eps T lambda):
///   a c lambda E - (a^2 s^2 / 2) E + (a c / 2) E + a^2 E + (a^2 / 4) E^2
///   + lambda^2 + 2 a c lambda + lambda - a^2 s^2 / 2 + a c / 2 + 3 a^2 / 4
/// where c = cos T, s = sin T. Throws UnsupportedMode for beta = +1.
Complex char_eq(Complex lambda, const Params& p);

/// Throws OutOfDomain for alpha < sqrt(2)/3. At the endpoint Omega0 = 0 and
/// Omega1, Omega2 are infinite.
SeriesCoeffs series_coeffs(double alpha);

/// Truncated series with n_terms in {1, 2, 3}.
HopfPoint hopf_series(double alpha, double eps, int n_terms);

struct NewtonOptions {
  int max_iter = 50;
  double tol = 1e-12;
  double fd_step = 1e-6;
};

/// Newton iteration on (T, Omega) for char_eq(i Omega; alpha, T, eps) = 0 with
/// a central-difference Jacobian. Returns Omega >= 0.
/// Throws DegenerateHopf (|seed.Omega| < 1e-6), SingularJacobian, NoConvergence.
HopfPoint hopf_newton(double alpha, double eps, const HopfPoint& seed,
                      const NewtonOptions& opts = {});

}  // namespace vdpdelay
