#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vdpdelay/dde.hpp"
#include "vdpdelay/spectral.hpp"

namespace vdpdelay {

/// Exponential growth rate of a trajectory envelope, fitted by least squares
/// to the log-amplitude over the trailing half of the run.
struct GrowthEstimate {
  double rate = 0.0;       // +inf for runs that blew up
  double r_squared = 0.0;  // in [0, 1]
  std::pair<double, double> window{0.0, 0.0};

  bool growing() const noexcept { return rate > 0.0; }
};

/// Minimum run accepted by growth_rate().
inline constexpr double kMinGrowthSpan = 40.0;
inline constexpr std::size_t kMinGrowthNodes = 200;

/// Least-squares slope of log(amplitude) against time over samples with
/// t >= t_from. Non-positive amplitudes are skipped.
GrowthEstimate fit_log_growth(std::span<const double> times, std::span<const double> amplitude,
                              double t_from);

/// Growth of the Euclidean state norm. Throws TooShort below 40 time units or
/// 200 nodes.
GrowthEstimate growth_rate(const Trajectory& traj);

/// Growth of the out-of-phase deviation ||(x1 - x2, v1 - v2)|| of a full
/// system trajectory.
GrowthEstimate antisymmetric_growth_rate(const Trajectory& traj);

struct ScanConfig {
  double step = 0.01;          // integrator step in slow time
  double window = 60.0;        // minimum integration span per probe
  double max_window = 2000.0;  // cap on the adaptive span 20 / |expected rate|
  double tol = 1e-3;           // bisection width
  double bracket = 0.4;        // half-width around the n = 3 series delay
  std::array<double, 2> history{1.0, 0.0};
  unsigned threads = 0;        // 0: hardware concurrency
};

/// Classifies the antisymmetric slow flow at (alpha, T, eps) by integrating
/// for `window` slow-time units.
GrowthEstimate probe_slow_flow(double alpha, double T, double eps, double window,
                               const ScanConfig& cfg = {});

/// Bisection on T for the sign change of the slow-flow growth rate. Throws
/// NoSignChange if the bracket does not straddle a transition.
double critical_delay(double alpha, double eps, double T_lo, double T_hi,
                      const ScanConfig& cfg = {});

struct ScanResult {
  double alpha = 0.0;
  double eps = 0.0;
  double T_sim = 0.0;
  std::array<double, 3> T_series{};  // n = 1, 2, 3
  double T_newton = 0.0;
  std::array<double, 3> abs_err{};
  std::array<double, 3> rel_err{};
  std::array<double, 3> pct_err{};
  std::string error;  // empty when the point succeeded

  bool ok() const noexcept { return error.empty(); }
};

/// `size` points on [sqrt(2)/3, 1], endpoints included, with the degenerate
/// left endpoint moved right by 1e-3.
std::vector<double> default_alpha_grid(std::size_t size = 20, double lo = kAlphaHopfMin,
                                       double hi = 1.0);

/// One ScanResult per grid point, in grid order. Failures are recorded per
/// point. Points run in parallel on cfg.threads workers.
std::vector<ScanResult> sweep(std::span<const double> alpha_grid, double eps,
                              const ScanConfig& cfg = {});

struct ErrorCell {
  double abs = 0.0;
  double rel = 0.0;
  double pct = 0.0;
  double alpha_at_max = 0.0;  // where the percent error peaks
};

struct ErrorTable {
  std::vector<double> eps;
  std::vector<int> n_terms;
  std::vector<std::vector<ErrorCell>> cells;  // [eps index][n index]
  std::vector<std::vector<ScanResult>> scans;  // [eps index]

  const ErrorCell& at(std::size_t eps_index, int n) const;
};

/// Maximum errors over the default grid of `grid_size` points per (eps, n).
/// Failed grid points are skipped; throws NoConvergence if every point fails.
ErrorTable error_table(std::span<const double> eps_list, std::span<const int> n_list,
                       std::size_t grid_size, const ScanConfig& cfg = {});

}  // namespace vdpdelay
