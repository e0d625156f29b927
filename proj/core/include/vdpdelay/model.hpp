#pragma once

#include <cstddef>

#include "vdpdelay/params.hpp"

namespace vdpdelay {

/// Lindstedt approximation y(t) = R cos(omega t) of the in-phase periodic
/// solution x1 = x2 = y.
struct InPhaseMode {
  double R = 0.0;
  double omega = 1.0;
  double k = 0.0;  // omega = 1 + eps * k
};

/// Linear ODE slow flow d/d(eta) (A, B) = M (A, B) obtained by dropping the
/// delay in the slow-flow coupling terms.
struct SlowFlowMatrix {
  double m11 = 0.0, m12 = 0.0;
  double m21 = 0.0, m22 = 0.0;

  double trace() const noexcept { return m11 + m22; }
  double determinant() const noexcept { return m11 * m22 - m12 * m21; }
};

/// Throws Error(ModeNonexistent) when 1 + alpha cos T <= 0.
InPhaseMode in_phase_mode(const Params& p);

SlowFlowMatrix ode_slow_flow_matrix(const Params& p);

/// Maps the principal angle theta in [0, pi] to branch `branch` of the
/// inverse cosine: even branches theta + 2 pi m, odd branches 2 pi (m+1) - theta.
double arccos_branch(double theta, int branch);

/// Delay where the ODE slow flow (beta = -1) has zero trace: cos T = -1/(3 alpha).
/// No determinant check. Throws OutOfDomain for alpha < 1/3.
double trace_zero_delay(double alpha, int branch = 0);

/// Hopf curve of the ODE slow flow: zero trace with positive determinant.
/// The determinant on the trace-zero curve is alpha^2 - 2/9, so this throws
/// NotAHopf below sqrt(2)/3 (the endpoint itself, where the determinant
/// vanishes to round-off, is accepted as the degenerate corner).
double hopf_curve_ode(double alpha, int branch = 0);

/// Saddle-node curve alpha = -cos T / (1 + cos^2 T), inverted in closed form
/// from alpha c^2 + c + alpha = 0. Valid for 0 < alpha <= 1/2.
double saddle_node_curve(double alpha, int branch = 0);

/// Birth of the in-phase mode, cos T = -1/alpha. Valid for alpha >= 1.
double mode_birth_curve(double alpha, int branch = 0);

enum class LindstedtOrder {
  Leading,          // y = R cos(omega t)
  FirstCorrection,  // adds eps * y1, y1 = -(R^3/32) sin(3 omega t)
};

/// Max-norm residual of the scalar in-phase equation
///   y'' + y - eps (1 - y^2) y' - eps alpha y'(t - T)
/// evaluated on `samples` points covering one period 2 pi / omega.
double lindstedt_residual(const Params& p, LindstedtOrder order,
                          std::size_t samples = 4001);

}  // namespace vdpdelay
