#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "vdpdelay/error.hpp"
#include "vdpdelay/model.hpp"
#include "vdpdelay/stability.hpp"

using namespace vdpdelay;

namespace {

Trajectory synthetic_decay(double rate, double span, double h) {
  DdeProblem p;
  p.dim = 2;
  p.rhs = [rate](double, std::span<const double> x, std::span<const double>, std::span<double> dx) {
    dx[0] = rate * x[0];
    dx[1] = 0.0;
  };
  p.history = [](double, std::span<double> out) {
    out[0] = 1.0;
    out[1] = 0.0;
  };
  return integrate(p, span, h);
}

}  // namespace

TEST_CASE("growth_rate") {
  SUBCASE("exact exponential") {
    const auto g = growth_rate(synthetic_decay(-1.0, 40.0, 0.01));
    CHECK(g.rate == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(g.r_squared > 0.999999);
    CHECK(g.window.first == doctest::Approx(20.0));
    CHECK(g.window.second == doctest::Approx(40.0));
  }
  SUBCASE("fit on explicit samples") {
    std::vector<double> t, a;
    for (int i = 0; i < 100; ++i) {
      t.push_back(i * 0.1);
      a.push_back(3.0 * std::exp(0.25 * i * 0.1));
    }
    const auto g = fit_log_growth(t, a, 0.0);
    CHECK(g.rate == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(g.r_squared == doctest::Approx(1.0));
  }
  SUBCASE("too short") {
    CHECK_THROWS_AS(growth_rate(synthetic_decay(-1.0, 30.0, 0.01)), Error);
    CHECK_THROWS_AS(growth_rate(synthetic_decay(-1.0, 45.0, 0.5)), Error);
  }
  SUBCASE("ODE slow flow left of the Hopf curve decays") {
    const double T = std::acos(-1.0 / 3.0) - 0.3;
    // Eigenvalue oracle: trace < 0, det > 0.
    const auto M = oracle::ode_matrix_beta_minus(1.0, T);
    REQUIRE(M[0][0] + M[1][1] < 0.0);
    const auto traj = integrate(slow_flow_problem({1.0, T, 0.0}), 60.0, 0.01);
    CHECK(growth_rate(traj).rate < 0.0);
  }
  SUBCASE("rate matches the ODE eigenvalue real part") {
    for (double dT : {-0.2, 0.15}) {
      const double T = std::acos(-1.0 / 3.0) + dT;
      const auto M = oracle::ode_matrix_beta_minus(1.0, T);
      const double sigma = 0.5 * (M[0][0] + M[1][1]);
      const auto g = probe_slow_flow(1.0, T, 0.0, 400.0);
      CHECK(g.rate == doctest::Approx(sigma).epsilon(0.02));
    }
  }
}

TEST_CASE("history independence of the growth sign") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  for (const double dT : {-0.05, 0.05}) {
    const double T = hopf_newton(0.8, 0.3, hopf_series(0.8, 0.3, 3)).T + dT;
    const bool reference = probe_slow_flow(0.8, T, 0.3, 200.0).growing();
    CHECK(reference == (dT > 0));
    for (int k = 0; k < 5; ++k) {
      ScanConfig cfg;
      const double th = angle(rng);
      cfg.history = {std::cos(th), std::sin(th)};
      CHECK(probe_slow_flow(0.8, T, 0.3, 200.0, cfg).growing() == reference);
    }
  }
}

TEST_CASE("critical_delay") {
  SUBCASE("eps = 0 recovers the ODE Hopf delay") {
    const double T0 = std::acos(-1.0 / 3.0);
    CHECK(std::abs(critical_delay(1.0, 0.0, T0 - 0.4, T0 + 0.4) - T0) < 2e-3);
  }
  SUBCASE("eps = 0.5 lands near the three-term series") {
    const double Ts = hopf_series(1.0, 0.5, 3).T;
    CHECK(std::abs(critical_delay(1.0, 0.5, Ts - 0.4, Ts + 0.4) - Ts) < 0.012);
  }
  SUBCASE("bracket from the series is valid near the left endpoint") {
    const double a = kAlphaHopfMin + 0.05;
    const double Ts = hopf_series(a, 0.1, 3).T;
    CHECK_NOTHROW(critical_delay(a, 0.1, Ts - 0.3, Ts + 0.3));
  }
  SUBCASE("result lies within tol of a sign change") {
    ScanConfig cfg;
    cfg.tol = 1e-3;
    const double Tc = critical_delay(0.8, 0.3, 1.5, 2.3, cfg);
    CHECK_FALSE(probe_slow_flow(0.8, Tc - cfg.tol, 0.3, 2000.0).growing());
    CHECK(probe_slow_flow(0.8, Tc + cfg.tol, 0.3, 2000.0).growing());
  }
  SUBCASE("invalid bracket") {
    CHECK_THROWS_WITH_AS(critical_delay(1.0, 0.1, 1.0, 1.2), doctest::Contains("NoSignChange"), Error);
  }
}

TEST_CASE("default alpha grid") {
  const auto g = default_alpha_grid(20);
  REQUIRE(g.size() == 20);
  CHECK(g.front() == doctest::Approx(kAlphaHopfMin + 1e-3));
  CHECK(g.back() == 1.0);
  CHECK(g[1] - g[0] < g[2] - g[1]);
  CHECK(g[2] - g[1] == doctest::Approx((1.0 - kAlphaHopfMin) / 19));
}

TEST_CASE("sweep") {
  SUBCASE("eps = 0: series and simulation agree") {
    const std::vector<double> grid{1.0};
    ScanConfig cfg;
    const auto r = sweep(grid, 0.0, cfg);
    REQUIRE(r.size() == 1);
    REQUIRE(r[0].ok());
    CHECK(r[0].abs_err[0] < 2 * cfg.tol);
  }
  SUBCASE("error fields and consistency triangle") {
    const std::vector<double> grid{0.6, 0.8, 1.0};
    for (double eps : {0.1, 0.5}) {
      const auto rows = sweep(grid, eps);
      for (const auto& r : rows) {
        REQUIRE(r.ok());
        for (int n = 0; n < 3; ++n) {
          CHECK(r.abs_err[n] == doctest::Approx(std::abs(r.T_sim - r.T_series[n])));
          CHECK(r.rel_err[n] == doctest::Approx(r.abs_err[n] / r.T_sim));
          CHECK(r.pct_err[n] == doctest::Approx(100 * r.rel_err[n]));
        }
        const double sim_newton = std::abs(r.T_sim - r.T_newton);
        const double sim_series = std::abs(r.T_sim - r.T_series[2]);
        const double series_newton = std::abs(r.T_series[2] - r.T_newton);
        CHECK(sim_newton <= sim_series + series_newton + 1e-15);
        CHECK(sim_newton < 0.03);
        CHECK(sim_series < 0.03);
        CHECK(series_newton < 0.03);
      }
    }
  }
  SUBCASE("failures are recorded per point") {
    const std::vector<double> grid{0.3, 1.0};
    const auto rows = sweep(grid, 0.1);
    CHECK_FALSE(rows[0].ok());
    CHECK(rows[0].error.find("OutOfDomain") != std::string::npos);
    CHECK(rows[1].ok());
  }
  SUBCASE("parallel and serial runs agree") {
    const std::vector<double> grid{0.55, 0.75, 0.95};
    ScanConfig serial;
    serial.threads = 1;
    ScanConfig parallel;
    parallel.threads = 3;
    const auto a = sweep(grid, 0.3, serial);
    const auto b = sweep(grid, 0.3, parallel);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(a[i].alpha == b[i].alpha);
      CHECK(a[i].T_sim == b[i].T_sim);
    }
  }
}

TEST_CASE("error_table on a coarse grid") {
  const std::vector<double> eps{0.3};
  const std::vector<int> n{1, 3};
  const auto t = error_table(eps, n, 4);
  REQUIRE(t.cells.size() == 1);
  REQUIRE(t.scans[0].size() == 4);
  const auto& n1 = t.at(0, 1);
  const auto& n3 = t.at(0, 3);
  CHECK(n1.pct > n3.pct);
  CHECK(n1.pct == doctest::Approx(100 * n1.rel));
  CHECK(n1.alpha_at_max == doctest::Approx(1.0));
  CHECK_THROWS_AS(t.at(0, 2), Error);
}
