#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "vdpdelay/error.hpp"
#include "vdpdelay/model.hpp"

using namespace vdpdelay;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected vdpdelay::Error");
  return ErrorCode::OutOfDomain;
}

}  // namespace

TEST_CASE("in-phase mode") {
  SUBCASE("uncoupled limit cycle") {
    const auto m = in_phase_mode({0.0, 1.0, 0.1});
    CHECK(m.R == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(m.omega == 1.0);
    CHECK(m.k == 0.0);
  }
  SUBCASE("cos T = 0") {
    const auto m = in_phase_mode({1.0, kPi / 2, 0.5});
    CHECK(m.R == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(m.k == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(m.omega == doctest::Approx(0.75).epsilon(1e-15));
  }
  SUBCASE("nonexistent at 1 + alpha cos T = 0") {
    CHECK(code_of([] { in_phase_mode({1.0, kPi, 0.1}); }) == ErrorCode::ModeNonexistent);
    CHECK(code_of([] { in_phase_mode({2.0, 2.0 * kPi / 3.0, 0.1}); }) == ErrorCode::ModeNonexistent);
    CHECK(code_of([] { in_phase_mode({3.0, kPi, 0.1}); }) == ErrorCode::ModeNonexistent);
  }
  SUBCASE("amplitude bound R^2 <= 4 (1 + |alpha|)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> a(-0.9, 0.9), t(0.0, 2 * kPi);
    for (int i = 0; i < 200; ++i) {
      const Params p{a(rng), t(rng), 0.2};
      const auto m = in_phase_mode(p);
      CHECK(m.R * m.R <= 4.0 * (1.0 + std::abs(p.alpha)) + 1e-12);
      CHECK(m.omega == doctest::Approx(1.0 - 0.1 * p.alpha * std::sin(p.T)).epsilon(1e-14));
    }
  }
  SUBCASE("amplitude vanishes approaching the mode-birth curve") {
    for (double alpha : {1.0, 1.5, 2.0, 4.0}) {
      const double Tb = mode_birth_curve(alpha);
      double prev = 1e9;
      for (double d : {1e-2, 1e-3, 1e-4}) {
        const double R = in_phase_mode({alpha, Tb - d, 0.1}).R;
        CHECK(R < prev);
        prev = R;
      }
      // Off the tangency, R^2 / d tends to 4 alpha sin T_b.
      if (alpha > 1.0) {
        const double d = 1e-6;
        const double R = in_phase_mode({alpha, Tb - d, 0.1}).R;
        CHECK(R * R / d == doctest::Approx(4.0 * alpha * std::sin(Tb)).epsilon(1e-4));
      } else {
        CHECK(prev < 1e-3);
      }
    }
  }
}

TEST_CASE("ODE slow-flow matrix") {
  SUBCASE("uncoupled") {
    for (double T : {0.0, 1.0, 2.5}) {
      const auto m = ode_slow_flow_matrix({0.0, T, 0.1, ModeSign::Antisymmetric});
      CHECK(m.m11 == -1.0);
      CHECK(m.m12 == 0.0);
      CHECK(m.m21 == 0.0);
      CHECK(m.m22 == 0.0);
    }
  }
  SUBCASE("symmetric channel") {
    const auto m = ode_slow_flow_matrix({1.0, kPi / 3, 0.1, ModeSign::Symmetric});
    CHECK(m.m11 == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(m.m12 == 0.0);
    CHECK(m.m21 == 0.0);
    CHECK(m.m22 == 0.0);
  }
  SUBCASE("trace vanishes at the curve intersection") {
    const auto m = ode_slow_flow_matrix({kAlphaHopfMin, 3 * kPi / 4, 0.0, ModeSign::Antisymmetric});
    CHECK(std::abs(m.trace()) < 1e-14);
    CHECK(std::abs(m.determinant()) < 1e-14);
  }
  SUBCASE("closed-form trace and determinant, antisymmetric channel") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> a(-2.0, 2.0), t(0.0, 2 * kPi);
    for (int i = 0; i < 100; ++i) {
      const double al = a(rng), T = t(rng), c = std::cos(T);
      const auto m = ode_slow_flow_matrix({al, T, 0.0, ModeSign::Antisymmetric});
      const auto ref = oracle::ode_matrix_beta_minus(al, T);
      CHECK(m.m11 == doctest::Approx(ref[0][0]).epsilon(1e-14));
      CHECK(m.m12 == doctest::Approx(ref[0][1]).epsilon(1e-14));
      CHECK(m.m21 == doctest::Approx(ref[1][0]).epsilon(1e-14));
      CHECK(m.m22 == doctest::Approx(ref[1][1]).epsilon(1e-14));
      CHECK(m.trace() == doctest::Approx(-1 - 3 * al * c).epsilon(1e-13));
      CHECK(m.determinant() == doctest::Approx(al * al + al * c + al * al * c * c).epsilon(1e-13));
    }
  }
}

TEST_CASE("Hopf curve of the ODE slow flow") {
  CHECK(hopf_curve_ode(kAlphaHopfMin) == doctest::Approx(3 * kPi / 4).epsilon(1e-14));
  CHECK(hopf_curve_ode(1.0) == doctest::Approx(1.9106332362490186).epsilon(1e-15));
  CHECK(trace_zero_delay(1.0 / 3.0) == doctest::Approx(kPi).epsilon(1e-15));
  // Zero trace below sqrt(2)/3 comes with a negative determinant: a saddle.
  CHECK(code_of([] { hopf_curve_ode(1.0 / 3.0); }) == ErrorCode::NotAHopf);
  CHECK(code_of([] { hopf_curve_ode(0.45); }) == ErrorCode::NotAHopf);
  CHECK(code_of([] { hopf_curve_ode(0.2); }) == ErrorCode::OutOfDomain);

  for (double alpha = kAlphaHopfMin + 1e-3; alpha < 3.0; alpha += 0.05) {
    const double T = hopf_curve_ode(alpha);
    CHECK(T > kPi / 2);
    CHECK(T <= kPi);
    const auto m = ode_slow_flow_matrix({alpha, T, 0.0, ModeSign::Antisymmetric});
    CHECK(std::abs(m.trace()) < 1e-12);
    CHECK(m.determinant() > 0.0);
  }
}

TEST_CASE("saddle-node curve") {
  CHECK(saddle_node_curve(0.5) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(saddle_node_curve(kAlphaHopfMin) == doctest::Approx(3 * kPi / 4).epsilon(1e-14));
  // (-1 + sqrt(1 - 4 * 0.16)) / 0.8 = -0.5
  CHECK(saddle_node_curve(0.4) == doctest::Approx(2 * kPi / 3).epsilon(1e-14));
  CHECK(code_of([] { saddle_node_curve(0.6); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([] { saddle_node_curve(0.0); }) == ErrorCode::OutOfDomain);

  for (double alpha = 0.01; alpha <= 0.5; alpha += 0.01) {
    const double T = saddle_node_curve(alpha);
    CHECK(-std::cos(T) / (1 + std::cos(T) * std::cos(T)) == doctest::Approx(alpha).epsilon(1e-12));
    const auto m = ode_slow_flow_matrix({alpha, T, 0.0, ModeSign::Antisymmetric});
    CHECK(std::abs(m.determinant()) < 1e-12);
  }
}

TEST_CASE("mode-birth curve") {
  CHECK(mode_birth_curve(1.0) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(mode_birth_curve(2.0) == doctest::Approx(2 * kPi / 3).epsilon(1e-15));
  CHECK(mode_birth_curve(std::sqrt(2.0)) == doctest::Approx(3 * kPi / 4).epsilon(1e-15));
  CHECK(code_of([] { mode_birth_curve(0.9); }) == ErrorCode::OutOfDomain);
}

TEST_CASE("inverse-cosine branches") {
  const double th = 2.0;
  CHECK(arccos_branch(th, 0) == th);
  CHECK(arccos_branch(th, 1) == doctest::Approx(2 * kPi - th));
  CHECK(arccos_branch(th, 2) == doctest::Approx(th + 2 * kPi));
  CHECK(arccos_branch(th, 3) == doctest::Approx(4 * kPi - th));
  for (int b = 0; b < 6; ++b) {
    CHECK(std::cos(hopf_curve_ode(1.0, b)) == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("Lindstedt residual") {
  for (const Params p : {Params{0.5, 1.0, 0.1}, Params{1.0, 1.9, 0.1}, Params{0.0, 1.0, 0.1}}) {
    const double r1 = lindstedt_residual(p, LindstedtOrder::FirstCorrection);
    const Params half{p.alpha, p.T, p.eps / 2};
    const double r2 = lindstedt_residual(half, LindstedtOrder::FirstCorrection);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.25));

    // The leading-order approximation alone leaves the (R^3/4) sin 3wt harmonic at O(eps).
    const double l1 = lindstedt_residual(p, LindstedtOrder::Leading);
    const double l2 = lindstedt_residual(half, LindstedtOrder::Leading);
    CHECK(l1 / l2 == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("parameter validation") {
  CHECK(code_of([] { Params{1.0, -1.0, 0.1}.validate(); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([] { Params{1.0, 1.0, -0.1}.validate(); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([] { Params{NAN, 1.0, 0.1}.validate(); }) == ErrorCode::OutOfDomain);
  CHECK_NOTHROW(Params{1.0, 0.0, 0.0}.validate());
}
