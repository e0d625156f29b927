#include "vdpdelay/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "vdpdelay/error.hpp"

namespace vdpdelay {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_long_enough(const Trajectory& traj) {
  if (traj.blow_up_time()) return;
  if (traj.t_end() - traj.t_begin() < kMinGrowthSpan || traj.size() < kMinGrowthNodes) {
    throw Error(ErrorCode::TooShort, "growth fit needs >= 40 time units and >= 200 nodes");
  }
}

GrowthEstimate blown_up(const Trajectory& traj) {
  GrowthEstimate g;
  g.rate = kInf;
  g.r_squared = 0.0;
  g.window = {traj.t_begin(), *traj.blow_up_time()};
  return g;
}

template <class Amplitude>
GrowthEstimate fit_trailing_half(const Trajectory& traj, Amplitude amplitude) {
  require_long_enough(traj);
  if (traj.blow_up_time()) return blown_up(traj);
  std::vector<double> t(traj.size());
  std::vector<double> a(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    t[i] = traj.time(i);
    a[i] = amplitude(traj.state(i));
  }
  const double mid = 0.5 * (traj.t_begin() + traj.t_end());
  return fit_log_growth(t, a, mid);
}

}  // namespace

GrowthEstimate fit_log_growth(std::span<const double> times, std::span<const double> amplitude,
                              double t_from) {
  double n = 0.0, st = 0.0, sy = 0.0;
  double t_first = kNaN, t_last = kNaN;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_from || !(amplitude[i] > 0.0)) continue;
    if (std::isnan(t_first)) t_first = times[i];
    t_last = times[i];
    n += 1.0;
    st += times[i];
    sy += std::log(amplitude[i]);
  }
  GrowthEstimate g;
  g.window = {t_first, t_last};
  if (n < 2.0) {
    // Everything decayed to zero (or nothing to fit).
    g.rate = -kInf;
    return g;
  }
  const double tm = st / n;
  const double ym = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_from || !(amplitude[i] > 0.0)) continue;
    const double dt = times[i] - tm;
    const double dy = std::log(amplitude[i]) - ym;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  g.rate = stt > 0.0 ? sty / stt : 0.0;
  if (syy > 0.0 && stt > 0.0) {
    g.r_squared = std::clamp(sty * sty / (stt * syy), 0.0, 1.0);
  } else {
    g.r_squared = 1.0;  // perfectly flat log-amplitude
  }
  return g;
}

GrowthEstimate growth_rate(const Trajectory& traj) {
  return fit_trailing_half(traj, [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  });
}

GrowthEstimate antisymmetric_growth_rate(const Trajectory& traj) {
  if (traj.dim() != 4) throw Error(ErrorCode::OutOfDomain, "expected a full-system trajectory");
  return fit_trailing_half(traj, [](std::span<const double> x) {
    return std::hypot(x[0] - x[2], x[1] - x[3]);
  });
}

GrowthEstimate probe_slow_flow(double alpha, double T, double eps, double window,
                               const ScanConfig& cfg) {
  const Params p{alpha, T, eps, ModeSign::Antisymmetric};
  const Trajectory traj = integrate(slow_flow_problem(p, cfg.history), window, cfg.step);
  return growth_rate(traj);
}

double critical_delay(double alpha, double eps, double T_lo, double T_hi, const ScanConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::OutOfDomain, "tol must be > 0");
  if (T_lo > T_hi) std::swap(T_lo, T_hi);
  T_lo = std::max(T_lo, 0.0);

  auto span_for = [&](double expected_rate) {
    double span = cfg.window;
    if (!std::isfinite(expected_rate)) return span;
    if (expected_rate > 0.0) {
      span = std::max(span, 20.0 / expected_rate);
    } else {
      span = std::max(span, cfg.max_window);
    }
    return std::min(span, std::max(cfg.window, cfg.max_window));
  };

  double r_lo = probe_slow_flow(alpha, T_lo, eps, cfg.window, cfg).rate;
  double r_hi = probe_slow_flow(alpha, T_hi, eps, cfg.window, cfg).rate;
  if ((r_lo > 0.0) == (r_hi > 0.0)) {
    throw Error(ErrorCode::NoSignChange,
                "growth rate " + std::to_string(r_lo) + " at T=" + std::to_string(T_lo) +
                    " and " + std::to_string(r_hi) + " at T=" + std::to_string(T_hi));
  }
  const bool lo_grows = r_lo > 0.0;

  const double cap = std::max(cfg.window, cfg.max_window);
  while (T_hi - T_lo >= cfg.tol) {
    const double mid = 0.5 * (T_lo + T_hi);
    // Rates are close to linear in T near the transition.
    double expected = std::isfinite(r_lo) && std::isfinite(r_hi)
                          ? 0.5 * std::abs(r_lo + r_hi)
                          : std::min(std::abs(r_lo), std::abs(r_hi));
    double span = span_for(expected);
    double r = probe_slow_flow(alpha, mid, eps, span, cfg).rate;
    // Re-probe when the measured rate is too slow to resolve over the span.
    while (std::abs(r) * span < 20.0 && span < cap) {
      span = span_for(std::abs(r));
      r = probe_slow_flow(alpha, mid, eps, span, cfg).rate;
    }
    if ((r > 0.0) == lo_grows) {
      T_lo = mid;
      r_lo = r;
    } else {
      T_hi = mid;
      r_hi = r;
    }
  }
  return 0.5 * (T_lo + T_hi);
}

std::vector<double> default_alpha_grid(std::size_t size, double lo, double hi) {
  std::vector<double> grid;
  if (size == 0) return grid;
  if (size == 1) return {hi};
  grid.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(size - 1));
  }
  if (std::abs(grid.front() - kAlphaHopfMin) < 1e-12) grid.front() += 1e-3;
  return grid;
}

namespace {

ScanResult scan_point(double alpha, double eps, const ScanConfig& cfg) {
  ScanResult r;
  r.alpha = alpha;
  r.eps = eps;
  r.T_sim = kNaN;
  r.T_newton = kNaN;
  r.T_series.fill(kNaN);
  r.abs_err.fill(kNaN);
  r.rel_err.fill(kNaN);
  r.pct_err.fill(kNaN);
  try {
    for (int n = 1; n <= 3; ++n) r.T_series[n - 1] = hopf_series(alpha, eps, n).T;
    const HopfPoint s3 = hopf_series(alpha, eps, 3);
    try {
      r.T_newton = hopf_newton(alpha, eps, s3).T;
    } catch (const Error&) {
      // Omega series is unreliable near sqrt(2)/3; retry from the leading frequency.
      try {
        HopfPoint seed = s3;
        seed.Omega = series_coeffs(alpha).Omega0;
        r.T_newton = hopf_newton(alpha, eps, seed).T;
      } catch (const Error&) {
      }
    }
    r.T_sim = critical_delay(alpha, eps, s3.T - cfg.bracket, s3.T + cfg.bracket, cfg);
    for (int i = 0; i < 3; ++i) {
      r.abs_err[i] = std::abs(r.T_sim - r.T_series[i]);
      r.rel_err[i] = r.abs_err[i] / std::abs(r.T_sim);
      r.pct_err[i] = 100.0 * r.rel_err[i];
    }
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<ScanResult> sweep(std::span<const double> alpha_grid, double eps, const ScanConfig& cfg) {
  std::vector<ScanResult> out(alpha_grid.size());
  unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, alpha_grid.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < alpha_grid.size(); i = next++) {
      out[i] = scan_point(alpha_grid[i], eps, cfg);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return out;
}

const ErrorCell& ErrorTable::at(std::size_t eps_index, int n) const {
  const auto it = std::find(n_terms.begin(), n_terms.end(), n);
  if (it == n_terms.end() || eps_index >= cells.size()) {
    throw Error(ErrorCode::OutOfDomain, "no such error-table cell");
  }
  return cells[eps_index][static_cast<std::size_t>(it - n_terms.begin())];
}

ErrorTable error_table(std::span<const double> eps_list, std::span<const int> n_list,
                       std::size_t grid_size, const ScanConfig& cfg) {
  for (int n : n_list) {
    if (n < 1 || n > 3) throw Error(ErrorCode::OutOfDomain, "n must be 1, 2 or 3");
  }
  ErrorTable table;
  table.eps.assign(eps_list.begin(), eps_list.end());
  table.n_terms.assign(n_list.begin(), n_list.end());
  const std::vector<double> grid = default_alpha_grid(grid_size);

  for (double eps : eps_list) {
    std::vector<ScanResult> scan = sweep(grid, eps, cfg);
    std::vector<ErrorCell> row(n_list.size());
    bool any = false;
    for (const ScanResult& r : scan) {
      if (!r.ok()) continue;
      any = true;
      for (std::size_t j = 0; j < n_list.size(); ++j) {
        const auto k = static_cast<std::size_t>(n_list[j] - 1);
        ErrorCell& c = row[j];
        c.abs = std::max(c.abs, r.abs_err[k]);
        c.rel = std::max(c.rel, r.rel_err[k]);
        if (r.pct_err[k] >= c.pct) {
          c.pct = r.pct_err[k];
          c.alpha_at_max = r.alpha;
        }
      }
    }
    if (!any) {
      throw Error(ErrorCode::NoConvergence, "every grid point failed at eps=" + std::to_string(eps));
    }
    table.cells.push_back(std::move(row));
    table.scans.push_back(std::move(scan));
  }
  return table;
}

}  // namespace vdpdelay
