#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vdpdelay/params.hpp"

namespace vdpdelay {

/// Uniformly sampled solution of a DDE with states and derivatives stored at
/// every node, so that eval() is a C1 piecewise cubic Hermite interpolant.
/// Immutable once returned by integrate().
class Trajectory {
 public:
  Trajectory(std::size_t dim, double t0, double h);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return times_.size(); }
  double t0() const noexcept { return t0_; }
  double step() const noexcept { return h_; }
  double t_begin() const noexcept { return times_.empty() ? t0_ : times_.front(); }
  double t_end() const noexcept { return times_.empty() ? t0_ : times_.back(); }

  double time(std::size_t i) const { return times_[i]; }
  std::span<const double> state(std::size_t i) const { return {&states_[i * dim_], dim_}; }
  std::span<const double> derivative(std::size_t i) const { return {&derivs_[i * dim_], dim_}; }

  /// Hermite interpolation; t must lie within [t_begin(), t_end()].
  void eval(double t, std::span<double> out) const;
  std::vector<double> eval(double t) const;

  /// Time at which the integration hit a non-finite or overflowing state.
  /// The stored nodes stop before that step.
  std::optional<double> blow_up_time() const noexcept { return blow_up_; }

  std::vector<std::string> labels;  // one per state component, for export

  // Used by the integrator while building the trajectory.
  void push(double t, std::span<const double> x, std::span<const double> dx);
  void mark_blow_up(double t) { blow_up_ = t; }
  void reserve(std::size_t nodes);

 private:
  std::size_t dim_;
  double t0_;
  double h_;
  std::vector<double> times_;
  std::vector<double> states_;
  std::vector<double> derivs_;
  std::optional<double> blow_up_;
};

/// x'(t) = f(t, x(t), x(t - delay)) with x(t) = history(t) for t <= t0.
struct DdeProblem {
  using Rhs = std::function<void(double t, std::span<const double> x,
                                 std::span<const double> x_delayed, std::span<double> dx)>;
  using History = std::function<void(double t, std::span<double> out)>;

  std::size_t dim = 0;
  double delay = 0.0;
  double t0 = 0.0;
  Rhs rhs;
  History history;
  std::vector<std::string> labels;
};

/// Step actually used by integrate() for a requested step and delay: the
/// largest h <= h_requested with delay / h an integer >= 4 (h_requested when
/// delay is zero).
double effective_step(double delay, double h_requested);

/// Classical RK4 by the method of steps. Nodes cover at least [t0, t_end].
/// A non-finite state or one exceeding 1e150 in magnitude stops the run and
/// is reported through Trajectory::blow_up_time() instead of an exception.
Trajectory integrate(const DdeProblem& prob, double t_end, double h);

/// Slow flow on (A, B) in slow time eta with lag eps * T, constant history.
DdeProblem slow_flow_problem(const Params& p, std::array<double, 2> initial = {1.0, 0.0});

/// Full coupled system on (x1, v1, x2, v2) in fast time with lag T. History is
/// the in-phase approximation on both oscillators plus `perturbation`
/// (dx, dv) on oscillator 1. Throws ModeNonexistent.
DdeProblem full_system_problem(const Params& p, std::array<double, 2> perturbation = {0.0, 0.0});

/// CSV with header `t,<label>,...` and 15 significant digits.
void write_csv(std::ostream& os, const Trajectory& traj);

}  // namespace vdpdelay
