#include <doctest.h>

#include <boost/math/tools/roots.hpp>

#include "foldcycle/flow.hpp"
#include "foldcycle/unfold.hpp"
#include "support.hpp"

using namespace foldcycle;
using fct::sys_a;

namespace {

const SmoothField kFold{Poly2::constant(1.0), Poly2::monomial(1, 0, -1.0)};

// Negative root of u²/2 − u³/3 = x²/2 − x³/3, the level set of SYS-A(1,1)'s upper Hamiltonian.
double phi_plus_sys_a11(double x) {
  const double h = x * x / 2 - x * x * x / 3;
  auto f = [&](double u) { return u * u / 2 - u * u * u / 3 - h; };
  boost::uintmax_t it = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, -1.0, -1e-12, boost::math::tools::eps_tolerance<double>(), it);
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("integrate_to_sigma on a fold") {
  // Level set y = (x0² − x²)/2. From (0.1, 0) the field points down, so the
  // arc above the line is traced backward in time; from (−0.2, 0) forward.
  const IntegratorConfig cfg;
  CHECK(integrate_to_sigma(kFold, {0.1, 0.0}, Direction::Backward, cfg).x_return ==
        doctest::Approx(-0.1).epsilon(1e-9));
  CHECK(integrate_to_sigma(kFold, {-0.2, 0.0}, Direction::Forward, cfg).x_return ==
        doctest::Approx(0.2).epsilon(1e-9));
  const SigmaHit hit = integrate_to_sigma(kFold, {0.1, 0.0}, Direction::Backward, cfg);
  CHECK(hit.trajectory.front()[0] == 0.1);
  CHECK(hit.trajectory.back()[1] == 0.0);
  CHECK(hit.t_return == doctest::Approx(0.2));

  // The opposite directions leave into y < 0 and never come back.
  IntegratorConfig short_run;
  short_run.max_time = 5.0;
  CHECK_THROWS_AS(integrate_to_sigma(kFold, {0.1, 0.0}, Direction::Forward, short_run), Error);
  CHECK_THROWS_AS(integrate_to_sigma(kFold, {-0.2, 0.0}, Direction::Backward, short_run), Error);
}

TEST_CASE("integrate_to_sigma errors") {
  const IntegratorConfig cfg;
  const SmoothField rising{Poly2::constant(1.0), Poly2::constant(1.0)};
  try {
    integrate_to_sigma(rising, {0.0, 0.0}, Direction::Forward, cfg);
    FAIL("expected NoReturn");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoReturn);
  }
  try {
    integrate_to_sigma(kFold, {0.5, 0.0}, Direction::Forward, cfg, Window{0.0, 0.1});
    FAIL("expected NotInWindow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInWindow);
  }
  IntegratorConfig bad;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK_THROWS_AS(integrate_to_sigma(kFold, {0.1, 0.0}, Direction::Forward, bad), Error);
}

TEST_CASE("half_return oracles") {
  const IntegratorConfig cfg;
  for (double x : {0.05, 0.1, 0.2}) CHECK(std::abs(half_return(sys_a(1, 0.0), Side::Upper, x, cfg) + x) < 1e-9);
  CHECK(half_return(sys_a(1, 1.0), Side::Upper, 0.1, cfg) == doctest::Approx(-0.0937).epsilon(1e-3 / 0.0937));
  CHECK(std::abs(half_return(sys_a(1, 1.0), Side::Upper, 0.1, cfg) - phi_plus_sys_a11(0.1)) < 1e-9);
  for (double c : {1.0, -1.0}) {
    for (double x : {0.05, 0.1, 0.2}) CHECK(std::abs(half_return(sys_a(2, c), Side::Lower, x, cfg) + x) < 1e-9);
  }
  CHECK(half_return(sys_a(1, 1.0), Side::Upper, 0.0, cfg) == 0.0);
}

TEST_CASE("displacement oracles") {
  const IntegratorConfig cfg;
  const ReturnSample s = displacement(sys_a(1, 1.0), 0.1, cfg);
  CHECK(s.delta_value == doctest::Approx(6.3e-3).epsilon(5e-4 / 6.3e-3));
  CHECK(s.delta_value == doctest::Approx(s.phi_plus - s.phi_minus));

  for (int k : {1, 2}) {
    for (double x : {0.01, 0.05, 0.1, 0.2, 0.3}) CHECK(std::abs(displacement(sys_a(k, 0.0), x, cfg).delta_value) < 1e-8);
  }

  const double x = 0.02;
  CHECK(displacement(sys_a(2, 1.0), x, cfg).delta_value / (x * x) == doctest::Approx(0.4).epsilon(0.02));
  CHECK(displacement(sys_a(1, 1.0), x, cfg).delta_value / (x * x) == doctest::Approx(2.0 / 3.0).epsilon(0.02));
}

TEST_CASE("displacement sign follows c") {
  const IntegratorConfig cfg;
  for (int k = 1; k <= 3; ++k) {
    for (double x = 0.02; x <= 0.2 + 1e-12; x += 0.02) {
      CHECK(displacement(sys_a(k, 1.0), x, cfg).delta_value > 0.0);
      CHECK(displacement(sys_a(k, -1.0), x, cfg).delta_value < 0.0);
    }
  }
}

TEST_CASE("half-return maps are involutions") {
  const IntegratorConfig cfg;
  for (const PiecewiseField& z : {sys_a(1, 1.0), sys_a(2, 1.0)}) {
    for (Side side : {Side::Upper, Side::Lower}) {
      for (int i = 1; i <= 10; ++i) {
        const double x = 0.01 * i;
        const double back = half_return(z, side, half_return(z, side, x, cfg), cfg);
        CHECK(std::abs(back - x) < 1e-7);
      }
    }
  }
}

TEST_CASE("tolerance scaling") {
  IntegratorConfig cfg;
  const double a = half_return(sys_a(1, 1.0), Side::Upper, 0.1, cfg);
  cfg.rel_tol /= 2.0;
  const double b = half_return(sys_a(1, 1.0), Side::Upper, 0.1, cfg);
  CHECK(std::abs(a - b) < 5e-9);
}

TEST_CASE("estimate_lyapunov") {
  const IntegratorConfig cfg;
  const LyapunovEstimate a = estimate_lyapunov(sys_a(1, 1.0), 0.001, 0.02, cfg);
  CHECK(a.order == 2);
  CHECK(a.coefficient == doctest::Approx(2.0 / 3.0).epsilon(0.02));
  CHECK(a.fit_r2 >= kLyapunovMinR2);
  CHECK(a.samples.size() == 20);

  const LyapunovEstimate b = estimate_lyapunov(sys_a(2, 1.0), 0.001, 0.02, cfg);
  CHECK(b.order == 2);
  CHECK(b.coefficient == doctest::Approx(0.4).epsilon(0.02));

  const LyapunovEstimate center = estimate_lyapunov(sys_a(2, 0.0), 0.001, 0.02, cfg);
  CHECK(center.center);

  CHECK_THROWS_AS(estimate_lyapunov(sys_a(1, 1.0), 0.02, 0.01, cfg), Error);
}

TEST_CASE("leading order is even") {
  const IntegratorConfig cfg;
  for (int k = 1; k <= 3; ++k) {
    for (double c : {1.0, -1.0, 0.5}) {
      const LyapunovEstimate e = estimate_lyapunov(sys_a(k, c), 0.001, 0.02, cfg);
      CHECK(e.order % 2 == 0);
      CHECK(e.order > 0);
      CHECK(e.coefficient == doctest::Approx(2.0 * c / (2 * k + 1)).epsilon(0.03));
    }
  }
}

TEST_CASE("starts on a fold terminate") {
  // x = 0.1 is the contact ε·a₃ of the unfolded SYS-A(3,1); Y(0.1, 0) is rounding noise.
  const PiecewiseField z = unfolded_field(sys_a(3, 1.0), UnfoldingParams{3, {-1, 1, 2, 3}, 0.05, 0.0});
  const IntegratorConfig cfg;
  for (Side side : {Side::Upper, Side::Lower}) {
    try {
      half_return(z, side, 0.1, cfg, Window{0.0, 0.1});
    } catch (const Error& e) {
      CHECK(category(e.code()) == ErrorCategory::Numerical);
    }
  }
}
