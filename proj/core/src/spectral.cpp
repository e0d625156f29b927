#include "vdpdelay/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "vdpdelay/error.hpp"

namespace vdpdelay {

namespace {

constexpr double kDegenerateOmega = 1e-6;
constexpr double kSingularJacobian = 1e-14;

// Returns (Re, Im) of char_eq at lambda = i Omega.
std::array<double, 2> hopf_residual(double alpha, double eps, double T, double Omega) {
  const Complex v = char_eq(Complex(0.0, Omega), Params{alpha, T, eps, ModeSign::Antisymmetric});
  return {v.real(), v.imag()};
}

double max_abs(const std::array<double, 2>& r) {
  return std::max(std::abs(r[0]), std::abs(r[1]));
}

}  // namespace

std::string_view to_string(HopfMethod m) noexcept {
  switch (m) {
    case HopfMethod::SeriesN1: return "series_n1";
    case HopfMethod::SeriesN2: return "series_n2";
    case HopfMethod::SeriesN3: return "series_n3";
    case HopfMethod::Newton: return "newton";
    case HopfMethod::Simulation: return "simulation";
  }
  return "unknown";
}

Complex char_eq(Complex lambda, const Params& p) {
  if (p.beta != ModeSign::Antisymmetric) {
    throw Error(ErrorCode::UnsupportedMode, "characteristic equation is only defined for beta = -1");
  }
  const double a = p.alpha;
  const double c = std::cos(p.T);
  const double s2 = std::sin(p.T) * std::sin(p.T);
  const Complex E = std::exp(-p.eps * p.T * lambda);

  const Complex delayed = a * c * lambda * E - 0.5 * a * a * s2 * E + 0.5 * a * c * E +
                          a * a * E + 0.25 * a * a * E * E;
  const Complex instant = lambda * lambda + 2.0 * a * c * lambda + lambda - 0.5 * a * a * s2 +
                          0.5 * a * c + 0.75 * a * a;
  return delayed + instant;
}

SeriesCoeffs series_coeffs(double alpha) {
  const double a2 = alpha * alpha;
  double q = 9.0 * a2 - 2.0;
  // sqrt(2)/3 itself rounds to 9 a^2 - 2 of order -1e-16.
  if (!(alpha > 0.0) || q < -1e-12) {
    throw Error(ErrorCode::OutOfDomain,
                "series requires alpha >= sqrt(2)/3, got " + std::to_string(alpha));
  }
  q = std::max(q, 0.0);

  const double a4 = a2 * a2;
  const double sq2 = std::sqrt(q);                // sqrt(9 a^2 - 2)
  const double sq1 = std::sqrt(9.0 * a2 - 1.0);   // sqrt(9 a^2 - 1)

  SeriesCoeffs k;
  k.T0 = std::acos(std::clamp(-1.0 / (3.0 * alpha), -1.0, 1.0));
  const double T0 = k.T0;
  k.Omega0 = sq2 / 3.0;
  k.T1 = -sq1 * T0 / 9.0;
  k.Omega1 = -(18.0 * a2 - 5.0) * T0 / (54.0 * sq2);
  k.T2 = (sq1 * (27.0 * a2 - 6.0) * T0 * T0 + (162.0 * a4 - 36.0 * a2 + 2.0) * T0) /
         (1458.0 * a2 - 162.0);
  k.Omega2 = sq2 *
             ((-8019.0 * a4 * a2 + 5346.0 * a4 - 1206.0 * a2 + 91.0) * T0 * T0 +
              sq1 * (648.0 * a4 - 324.0 * a2 + 40.0) * T0) /
             (157464.0 * a4 - 69984.0 * a2 + 7776.0);
  return k;
}

HopfPoint hopf_series(double alpha, double eps, int n_terms) {
  if (n_terms < 1 || n_terms > 3) {
    throw Error(ErrorCode::OutOfDomain, "n_terms must be 1, 2 or 3");
  }
  if (!(eps >= 0.0)) throw Error(ErrorCode::OutOfDomain, "eps must be >= 0");
  const SeriesCoeffs k = series_coeffs(alpha);
  const std::array<double, 3> Ts{k.T0, k.T1, k.T2};
  const std::array<double, 3> Os{k.Omega0, k.Omega1, k.Omega2};

  HopfPoint h;
  h.alpha = alpha;
  h.method = static_cast<HopfMethod>(static_cast<int>(HopfMethod::SeriesN1) + n_terms - 1);
  double pw = 1.0;
  for (int i = 0; i < n_terms; ++i) {
    h.T += pw * Ts[i];
    h.Omega += pw * Os[i];
    pw *= eps;
    if (pw == 0.0) break;  // avoids 0 * inf at the degenerate endpoint
  }
  return h;
}

HopfPoint hopf_newton(double alpha, double eps, const HopfPoint& seed, const NewtonOptions& opts) {
  if (!std::isfinite(seed.T) || !std::isfinite(seed.Omega)) {
    throw Error(ErrorCode::NoConvergence, "non-finite seed");
  }
  if (std::abs(seed.Omega) < kDegenerateOmega) {
    throw Error(ErrorCode::DegenerateHopf, "seed frequency below 1e-6 is a zero-eigenvalue point");
  }
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::OutOfDomain, "newton tol must be > 0");

  double T = seed.T;
  double W = seed.Omega;
  auto r = hopf_residual(alpha, eps, T, W);
  int iter = 0;
  while (max_abs(r) >= opts.tol) {
    if (iter == opts.max_iter) {
      throw Error(ErrorCode::NoConvergence,
                  "residual " + std::to_string(max_abs(r)) + " after " +
                      std::to_string(opts.max_iter) + " iterations");
    }
    const double d = opts.fd_step;
    const auto rTp = hopf_residual(alpha, eps, T + d, W);
    const auto rTm = hopf_residual(alpha, eps, T - d, W);
    const auto rWp = hopf_residual(alpha, eps, T, W + d);
    const auto rWm = hopf_residual(alpha, eps, T, W - d);
    const double j11 = (rTp[0] - rTm[0]) / (2.0 * d);
    const double j21 = (rTp[1] - rTm[1]) / (2.0 * d);
    const double j12 = (rWp[0] - rWm[0]) / (2.0 * d);
    const double j22 = (rWp[1] - rWm[1]) / (2.0 * d);
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < kSingularJacobian) {
      throw Error(ErrorCode::SingularJacobian, "jacobian determinant " + std::to_string(det));
    }
    T -= (j22 * r[0] - j12 * r[1]) / det;
    W -= (-j21 * r[0] + j11 * r[1]) / det;
    if (!std::isfinite(T) || !std::isfinite(W)) {
      throw Error(ErrorCode::NoConvergence, "iterate left the finite range");
    }
    r = hopf_residual(alpha, eps, T, W);
    ++iter;
  }

  HopfPoint h;
  h.alpha = alpha;
  h.T = T;
  h.Omega = std::abs(W);
  h.method = HopfMethod::Newton;
  h.iterations = iter;
  h.residual = max_abs(r);
  return h;
}

}  // namespace vdpdelay
