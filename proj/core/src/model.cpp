#include "vdpdelay/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vdpdelay/error.hpp"

namespace vdpdelay {

namespace {

// 1 + alpha cos T at or below this is treated as the mode-birth boundary.
constexpr double kModeExistenceTol = 1e-12;

// Slack on |cos T| <= 1 and on sign tests that land on a curve endpoint.
constexpr double kEndpointTol = 1e-12;

double clamped_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

[[noreturn]] void out_of_domain(const char* what, double alpha) {
  throw Error(ErrorCode::OutOfDomain,
              std::string(what) + " undefined at alpha=" + std::to_string(alpha));
}

}  // namespace

void Params::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(T) || !std::isfinite(eps)) {
    throw Error(ErrorCode::OutOfDomain, "non-finite parameter");
  }
  if (eps < 0.0) throw Error(ErrorCode::OutOfDomain, "eps must be >= 0");
  if (T < 0.0) throw Error(ErrorCode::OutOfDomain, "T must be >= 0");
}

InPhaseMode in_phase_mode(const Params& p) {
  const double radicand = 1.0 + p.alpha * std::cos(p.T);
  if (!(radicand > kModeExistenceTol)) {
    throw Error(ErrorCode::ModeNonexistent,
                "1 + alpha cos T = " + std::to_string(radicand));
  }
  InPhaseMode m;
  m.R = 2.0 * std::sqrt(radicand);
  m.k = -0.5 * p.alpha * std::sin(p.T);
  m.omega = 1.0 + p.eps * m.k;
  return m;
}

SlowFlowMatrix ode_slow_flow_matrix(const Params& p) {
  const double b = sign_value(p.beta);
  const double half = 0.5 * p.alpha;
  const double c = std::cos(p.T);
  const double s = std::sin(p.T);
  SlowFlowMatrix m;
  m.m11 = -1.0 + half * (b - 3.0) * c;
  m.m12 = half * (1.0 - b) * s;
  m.m21 = -half * (1.0 - b) * s;
  m.m22 = -half * (1.0 - b) * c;
  return m;
}

double arccos_branch(double theta, int branch) {
  if (branch < 0) throw Error(ErrorCode::OutOfDomain, "negative branch index");
  const int m = branch / 2;
  return branch % 2 == 0 ? theta + 2.0 * kPi * m : 2.0 * kPi * (m + 1) - theta;
}

double trace_zero_delay(double alpha, int branch) {
  if (!(alpha >= 1.0 / 3.0 - kEndpointTol)) out_of_domain("trace-zero curve", alpha);
  return arccos_branch(clamped_acos(-1.0 / (3.0 * alpha)), branch);
}

double hopf_curve_ode(double alpha, int branch) {
  const double T = trace_zero_delay(alpha, branch);
  Params p{alpha, T, 0.0, ModeSign::Antisymmetric};
  const double det = ode_slow_flow_matrix(p).determinant();
  if (det < -kEndpointTol) {
    throw Error(ErrorCode::NotAHopf, "determinant " + std::to_string(det) +
                                         " <= 0 at alpha=" + std::to_string(alpha));
  }
  return T;
}

double saddle_node_curve(double alpha, int branch) {
  if (!(alpha > 0.0) || alpha > 0.5 + kEndpointTol) out_of_domain("saddle-node curve", alpha);
  const double disc = std::max(0.0, 1.0 - 4.0 * alpha * alpha);
  const double c = (-1.0 + std::sqrt(disc)) / (2.0 * alpha);
  return arccos_branch(clamped_acos(c), branch);
}

double mode_birth_curve(double alpha, int branch) {
  if (!(alpha >= 1.0 - kEndpointTol)) out_of_domain("mode-birth curve", alpha);
  return arccos_branch(clamped_acos(-1.0 / alpha), branch);
}

double lindstedt_residual(const Params& p, LindstedtOrder order, std::size_t samples) {
  const InPhaseMode mode = in_phase_mode(p);
  const double R = mode.R;
  const double w = mode.omega;
  const double c3 = order == LindstedtOrder::FirstCorrection ? -p.eps * R * R * R / 32.0 : 0.0;

  struct Jet {
    double y, dy, ddy;
  };
  auto eval = [&](double t) {
    const double ph = w * t;
    return Jet{R * std::cos(ph) + c3 * std::sin(3.0 * ph),
               -R * w * std::sin(ph) + 3.0 * w * c3 * std::cos(3.0 * ph),
               -R * w * w * std::cos(ph) - 9.0 * w * w * c3 * std::sin(3.0 * ph)};
  };

  const double period = 2.0 * kPi / w;
  const std::size_t n = std::max<std::size_t>(samples, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = period * static_cast<double>(i) / static_cast<double>(n - 1);
    const Jet now = eval(t);
    const Jet lag = eval(t - p.T);
    const double r = now.ddy + now.y - p.eps * (1.0 - now.y * now.y) * now.dy -
                     p.eps * p.alpha * lag.dy;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace vdpdelay
