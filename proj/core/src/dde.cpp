#include "vdpdelay/dde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "vdpdelay/error.hpp"
#include "vdpdelay/model.hpp"

namespace vdpdelay {

namespace {

constexpr double kOverflow = 1e150;
constexpr int kMinStepsPerDelay = 4;

bool finite_and_bounded(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(),
                     [](double v) { return std::isfinite(v) && std::abs(v) < kOverflow; });
}

}  // namespace

Trajectory::Trajectory(std::size_t dim, double t0, double h) : dim_(dim), t0_(t0), h_(h) {}

void Trajectory::push(double t, std::span<const double> x, std::span<const double> dx) {
  times_.push_back(t);
  states_.insert(states_.end(), x.begin(), x.end());
  derivs_.insert(derivs_.end(), dx.begin(), dx.end());
}

void Trajectory::reserve(std::size_t nodes) {
  times_.reserve(nodes);
  states_.reserve(nodes * dim_);
  derivs_.reserve(nodes * dim_);
}

void Trajectory::eval(double t, std::span<double> out) const {
  if (times_.empty() || t < t_begin() - 1e-9 * h_ || t > t_end() + 1e-9 * h_) {
    throw Error(ErrorCode::OutOfDomain, "trajectory evaluated outside its span at t=" + std::to_string(t));
  }
  const double u = (t - t0_) / h_;
  const double nearest = std::round(u);
  if (std::abs(u - nearest) < 1e-9 && nearest >= 0.0 && nearest < static_cast<double>(size())) {
    std::copy_n(&states_[static_cast<std::size_t>(nearest) * dim_], dim_, out.begin());
    return;
  }
  auto i = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(size() - 1)));
  if (i + 1 >= size()) {
    if (size() == 1) {
      std::copy_n(&states_[0], dim_, out.begin());
      return;
    }
    i = size() - 2;
  }
  const double s = std::clamp(u - static_cast<double>(i), 0.0, 1.0);
  if (s == 0.0) {
    std::copy_n(&states_[i * dim_], dim_, out.begin());
    return;
  }
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  const double* y0 = &states_[i * dim_];
  const double* y1 = &states_[(i + 1) * dim_];
  const double* d0 = &derivs_[i * dim_];
  const double* d1 = &derivs_[(i + 1) * dim_];
  for (std::size_t k = 0; k < dim_; ++k) {
    out[k] = h00 * y0[k] + h_ * h10 * d0[k] + h01 * y1[k] + h_ * h11 * d1[k];
  }
}

std::vector<double> Trajectory::eval(double t) const {
  std::vector<double> out(dim_);
  eval(t, out);
  return out;
}

double effective_step(double delay, double h_requested) {
  if (!(h_requested > 0.0)) throw Error(ErrorCode::OutOfDomain, "step must be > 0");
  if (delay < 0.0) throw Error(ErrorCode::OutOfDomain, "delay must be >= 0");
  if (delay == 0.0) return h_requested;
  const double n = std::max<double>(kMinStepsPerDelay, std::ceil(delay / h_requested - 1e-9));
  return delay / n;
}

Trajectory integrate(const DdeProblem& prob, double t_end, double h_requested) {
  if (prob.dim == 0 || !prob.rhs || !prob.history) {
    throw Error(ErrorCode::OutOfDomain, "incomplete DDE problem");
  }
  if (!(t_end > prob.t0)) throw Error(ErrorCode::OutOfDomain, "t_end must exceed t0");
  const double h = effective_step(prob.delay, h_requested);
  const std::size_t n = prob.dim;
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - prob.t0) / h - 1e-9));

  Trajectory traj(n, prob.t0, h);
  traj.labels = prob.labels;
  traj.reserve(steps + 1);

  std::vector<double> x(n), xd(n), k1(n), k2(n), k3(n), k4(n), tmp(n);

  // Delayed state; the lag is >= 4h so stage times never need the open step.
  auto delayed = [&](double t, std::span<double> out) {
    if (prob.delay == 0.0) return;
    const double td = t - prob.delay;
    if (td <= prob.t0) {
      prob.history(td, out);
    } else {
      traj.eval(td, out);
    }
  };
  auto f = [&](double t, std::span<const double> state, std::span<double> out) {
    if (prob.delay == 0.0) {
      prob.rhs(t, state, state, out);
    } else {
      delayed(t, xd);
      prob.rhs(t, state, xd, out);
    }
  };

  prob.history(prob.t0, x);
  f(prob.t0, x, k1);
  traj.push(prob.t0, x, k1);
  if (!finite_and_bounded(x)) {
    traj.mark_blow_up(prob.t0);
    return traj;
  }

  for (std::size_t i = 0; i < steps; ++i) {
    const double t = prob.t0 + static_cast<double>(i) * h;
    // k1 is the derivative already stored at the current node.
    for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * h * k1[j];
    f(t + 0.5 * h, tmp, k2);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + 0.5 * h * k2[j];
    f(t + 0.5 * h, tmp, k3);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + h * k3[j];
    f(t + h, tmp, k4);
    for (std::size_t j = 0; j < n; ++j) {
      tmp[j] = x[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    const double t_next = prob.t0 + static_cast<double>(i + 1) * h;
    if (!finite_and_bounded(tmp)) {
      traj.mark_blow_up(t_next);
      break;
    }
    x.swap(tmp);
    f(t_next, x, k1);
    if (!finite_and_bounded(k1)) {
      traj.mark_blow_up(t_next);
      break;
    }
    traj.push(t_next, x, k1);
  }
  return traj;
}

DdeProblem slow_flow_problem(const Params& p, std::array<double, 2> initial) {
  p.validate();
  const double b = sign_value(p.beta);
  const double h = 0.5 * p.alpha;
  const double c = std::cos(p.T);
  const double s = std::sin(p.T);

  DdeProblem prob;
  prob.dim = 2;
  prob.delay = p.eps * p.T;
  prob.labels = {"A", "B"};
  prob.rhs = [=](double, std::span<const double> x, std::span<const double> xd,
                 std::span<double> dx) {
    const double A = x[0], B = x[1], Ad = xd[0], Bd = xd[1];
    dx[0] = -A - 3.0 * h * A * c + h * B * s + h * b * Ad * c - h * b * Bd * s;
    dx[1] = -h * A * s - h * B * c + h * b * Ad * s + h * b * Bd * c;
  };
  prob.history = [initial](double, std::span<double> out) {
    out[0] = initial[0];
    out[1] = initial[1];
  };
  return prob;
}

DdeProblem full_system_problem(const Params& p, std::array<double, 2> perturbation) {
  p.validate();
  const InPhaseMode mode = in_phase_mode(p);
  const double eps = p.eps;
  const double alpha = p.alpha;

  DdeProblem prob;
  prob.dim = 4;
  prob.delay = p.T;
  prob.labels = {"x1", "v1", "x2", "v2"};
  prob.rhs = [=](double, std::span<const double> x, std::span<const double> xd,
                 std::span<double> dx) {
    dx[0] = x[1];
    dx[1] = -x[0] + eps * (1.0 - x[0] * x[0]) * x[1] + eps * alpha * xd[3];
    dx[2] = x[3];
    dx[3] = -x[2] + eps * (1.0 - x[2] * x[2]) * x[3] + eps * alpha * xd[1];
  };
  prob.history = [R = mode.R, w = mode.omega, perturbation](double t, std::span<double> out) {
    const double y = R * std::cos(w * t);
    const double dy = -R * w * std::sin(w * t);
    out[0] = y + perturbation[0];
    out[1] = dy + perturbation[1];
    out[2] = y;
    out[3] = dy;
  };
  return prob;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
  os << 't';
  for (std::size_t k = 0; k < traj.dim(); ++k) {
    os << ',' << (k < traj.labels.size() ? traj.labels[k] : "x" + std::to_string(k));
  }
  os << '\n';
  char buf[32];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.15g", traj.time(i));
    os << buf;
    for (double v : traj.state(i)) {
      std::snprintf(buf, sizeof buf, "%.15g", v);
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace vdpdelay
