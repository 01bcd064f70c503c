#include "foldcycle/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <tuple>

#include <boost/numeric/odeint.hpp>

namespace foldcycle {

namespace odeint = boost::numeric::odeint;

void IntegratorConfig::validate() const {
  const bool ok = rel_tol > 0.0 && abs_tol > 0.0 && max_step > 0.0 && event_tol > 0.0 && departure_eta > 0.0 &&
                  departure_t_min > 0.0 && max_time > 0.0;
  if (!ok) throw Error(ErrorCode::InvalidArgument, "integrator tolerances and limits must be positive");
}

namespace {

// Flat term list; avoids map traversal and repeated pow() in the RHS.
class CompiledPoly {
 public:
  explicit CompiledPoly(const Poly2& p) : max_i_(0), max_j_(0) {
    for (const auto& [key, c] : p.terms()) {
      terms_.emplace_back(key.first, key.second, c);
      max_i_ = std::max(max_i_, key.first);
      max_j_ = std::max(max_j_, key.second);
    }
  }

  // Σ|c·x^i·y^j|, the scale of the rounding error in operator().
  double magnitude(double x, double y) const {
    double acc = 0.0;
    for (const auto& [i, j, c] : terms_) acc += std::abs(c * std::pow(x, i) * std::pow(y, j));
    return acc;
  }

  double operator()(double x, double y) const {
    std::array<double, kMaxDegree + 1> xp;
    std::array<double, kMaxDegree + 1> yp;
    xp[0] = 1.0;
    yp[0] = 1.0;
    for (int i = 1; i <= max_i_; ++i) xp[i] = xp[i - 1] * x;
    for (int j = 1; j <= max_j_; ++j) yp[j] = yp[j - 1] * y;
    double acc = 0.0;
    for (const auto& [i, j, c] : terms_) acc += c * xp[i] * yp[j];
    return acc;
  }

 private:
  std::vector<std::tuple<int, int, double>> terms_;
  int max_i_;
  int max_j_;
};

struct PlaneSystem {
  CompiledPoly X;
  CompiledPoly Y;
  double time_sign;

  void operator()(const PlaneState& s, PlaneState& ds, double /*t*/) const {
    ds[0] = time_sign * X(s[0], s[1]);
    ds[1] = time_sign * Y(s[0], s[1]);
  }
};

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// A tenth of the return time of the osculating parabola y ≈ y'τ + y''τ²/2.
double initial_step(const SmoothField& f, const PlaneState& start, const PlaneState& velocity,
                    const IntegratorConfig& cfg) {
  const double cap = 0.1 * cfg.max_step;
  if (start[1] != 0.0) return std::min(1e-3, cap);
  const double yx = f.Y.partial(Var::X, 1).eval(start[0], start[1]);
  const double yy = f.Y.partial(Var::Y, 1).eval(start[0], start[1]);
  const double accel = yx * std::abs(velocity[0]) * sign_of(velocity[0]) + yy * velocity[1];
  if (accel == 0.0) return std::min(1e-3, cap);
  const double t_ret = 2.0 * std::abs(velocity[1]) / std::abs(accel);
  return std::clamp(0.05 * t_ret, 1e-14, cap);
}

bool outside(const std::optional<Window>& w, const PlaneState& s) {
  if (!w) return false;
  const double box = 2.0 * w->radius;
  return std::abs(s[0] - w->center) > box || std::abs(s[1]) > box;
}

}  // namespace

SigmaHit integrate_to_sigma(const SmoothField& f, PlaneState start, Direction dir, const IntegratorConfig& cfg,
                            std::optional<Window> window) {
  cfg.validate();
  const double time_sign = dir == Direction::Forward ? 1.0 : -1.0;
  const PlaneSystem sys{CompiledPoly(f.X), CompiledPoly(f.Y), time_sign};

  PlaneState v0;
  sys(start, v0, 0.0);

  // Sign of y once the orbit has left the switching line; 0 while unknown.
  int side_sign = 0;
  bool departed = false;
  if (start[1] != 0.0) {
    side_sign = sign_of(start[1]);
    departed = true;
  } else {
    side_sign = sign_of(v0[1]);
  }

  // Near a fold Y is pure rounding noise; an absolute floor below that noise
  // stalls the step size controller.
  const double abs_tol = std::max(
      cfg.abs_tol, kRoundoffTolFactor * std::numeric_limits<double>::epsilon() * sys.Y.magnitude(start[0], start[1]));
  auto stepper = odeint::make_dense_output(abs_tol, cfg.rel_tol, cfg.max_step,
                                           odeint::runge_kutta_dopri5<PlaneState>());
  stepper.initialize(start, 0.0, initial_step(f, start, v0, cfg));

  SigmaHit hit;
  hit.trajectory.push_back(start);

  for (int steps = 0;; ++steps) {
    if (steps >= kMaxIntegrationSteps) throw Error(ErrorCode::StepFailure, "step budget exhausted");
    std::pair<double, double> span;
    try {
      span = stepper.do_step(std::cref(sys));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::StepFailure, e.what());
    }
    const auto [t0, t1] = span;
    const PlaneState cur = stepper.current_state();
    if (!std::isfinite(cur[0]) || !std::isfinite(cur[1]) || !(t1 > t0)) {
      throw Error(ErrorCode::StepFailure, "step size underflow or non-finite state");
    }

    std::optional<double> bracket_lo;
    if (side_sign == 0) {
      if (std::abs(cur[1]) > cfg.departure_eta || t1 > cfg.departure_t_min) {
        side_sign = sign_of(cur[1]);
        departed = side_sign != 0;
      }
    } else if (!departed) {
      if (cur[1] * side_sign > 0.0) {
        departed = true;
      } else {
        // The first step may overshoot a very short arc entirely.
        PlaneState probe;
        for (int m = 1; m < 64; ++m) {
          const double tm = t0 + (t1 - t0) * m / 64.0;
          stepper.calc_state(tm, probe);
          if (probe[1] * side_sign > 0.0) {
            departed = true;
            bracket_lo = tm;
            break;
          }
        }
      }
    } else if (cur[1] * side_sign <= 0.0) {
      bracket_lo = t0;
    }

    if (bracket_lo) {
      // Bisection on the dense output.
      double lo = *bracket_lo;
      double hi = t1;
      PlaneState st;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        stepper.calc_state(mid, st);
        if (st[1] * side_sign > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      double t_event = 0.5 * (lo + hi);
      PlaneState dense_state;
      stepper.calc_state(t_event, dense_state);

      // Newton polish with exact single steps from the last accepted point.
      const PlaneState base = stepper.previous_state();
      const double t_base = stepper.previous_time();
      PlaneState dbase;
      sys(base, dbase, t_base);
      odeint::runge_kutta_dopri5<PlaneState> rk;
      auto state_at = [&](double t) {
        PlaneState out;
        PlaneState dout;
        rk.do_step(std::cref(sys), base, dbase, t_base, out, dout, t - t_base);
        return out;
      };
      double t = t_event;
      PlaneState polished = state_at(t);
      const double t_hi = t1 + 0.5 * (t1 - t0);
      for (int it = 0; it < 8; ++it) {
        PlaneState d;
        sys(polished, d, t);
        if (d[1] == 0.0) break;
        const double tn = std::clamp(t - polished[1] / d[1], t_base, t_hi);
        const bool converged = std::abs(tn - t) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(t);
        t = tn;
        polished = state_at(t);
        if (converged) break;
      }
      if (std::abs(polished[1]) > std::abs(dense_state[1])) {
        polished = dense_state;
        t = t_event;
      }
      if (std::abs(polished[1]) > cfg.event_tol) {
        throw Error(ErrorCode::StepFailure, "event localization stalled at |y| = " + std::to_string(polished[1]));
      }
      polished[1] = 0.0;
      hit.trajectory.push_back(polished);
      hit.x_return = polished[0];
      hit.t_return = t;
      return hit;
    }

    hit.trajectory.push_back(cur);
    if (outside(window, cur)) {
      throw Error(ErrorCode::NotInWindow, "orbit left the window around x = " + std::to_string(window->center));
    }
    if (t1 >= cfg.max_time) {
      throw Error(ErrorCode::NoReturn, "no return to the switching line within max_time");
    }
  }
}

double half_return(const PiecewiseField& z, Side side, double x, const IntegratorConfig& cfg,
                   std::optional<Window> window) {
  const SmoothField& f = z.side(side);
  const double y0 = f.Y.eval(x, 0.0);
  if (y0 == 0.0) return x;
  const bool points_in = side == Side::Upper ? y0 > 0.0 : y0 < 0.0;
  return integrate_to_sigma(f, {x, 0.0}, points_in ? Direction::Forward : Direction::Backward, cfg, window).x_return;
}

ReturnSample displacement(const PiecewiseField& z, double x, const IntegratorConfig& cfg, double base,
                          std::optional<Window> window) {
  const double delta = z.upper.X.eval(base, 0.0) >= 0.0 ? 1.0 : -1.0;
  ReturnSample s;
  s.x = x;
  s.phi_plus = half_return(z, Side::Upper, x, cfg, window);
  s.phi_minus = half_return(z, Side::Lower, x, cfg, window);
  s.delta_value = delta * (s.phi_plus - s.phi_minus);
  return s;
}

LyapunovEstimate estimate_lyapunov(const PiecewiseField& z, double u_min, double u_max, const IntegratorConfig& cfg,
                                   double base, int points) {
  if (!(u_min > 0.0 && u_max > u_min) || points < 3) {
    throw Error(ErrorCode::InvalidArgument, "estimate_lyapunov needs 0 < u_min < u_max and >= 3 points");
  }
  LyapunovEstimate est;
  est.x_min = base + u_min;
  est.x_max = base + u_max;
  const Window window{base, u_max};
  const double ratio = std::log(u_max / u_min);
  for (int i = 0; i < points; ++i) {
    const double u = u_min * std::exp(ratio * i / (points - 1));
    est.samples.push_back(displacement(z, base + u, cfg, base, window));
  }

  const bool center = std::all_of(est.samples.begin(), est.samples.end(), [&](const ReturnSample& s) {
    return std::abs(s.delta_value) < 10.0 * cfg.event_tol;
  });
  if (center) {
    est.center = true;
    return est;
  }

  const int sign = sign_of(est.samples.front().delta_value);
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& s : est.samples) {
    if (sign_of(s.delta_value) != sign || sign == 0) {
      throw Error(ErrorCode::Inconclusive, "displacement changes sign inside the fit window");
    }
    lx.push_back(std::log(s.x - base));
    ly.push_back(std::log(std::abs(s.delta_value)));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  est.slope = sxy / sxx;
  est.fit_r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  est.order = static_cast<int>(std::lround(est.slope));
  double log_prefactor = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) log_prefactor += ly[i] - est.order * lx[i];
  est.coefficient = sign * std::exp(log_prefactor / n);

  if (est.fit_r2 < kLyapunovMinR2 || std::abs(est.slope - est.order) > kLyapunovMaxOrderOffset) {
    throw Error(ErrorCode::Inconclusive, "log-log fit slope " + std::to_string(est.slope) + ", r2 " +
                                             std::to_string(est.fit_r2));
  }
  return est;
}

}  // namespace foldcycle
