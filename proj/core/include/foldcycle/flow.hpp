#pragma once

#include <array>
#include <optional>
#include <vector>

#include "foldcycle/field.hpp"

namespace foldcycle {

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-40;         // arc heights scale like x^{2k}; keep the floor far below them
  double max_step = 1.0;
  double event_tol = 1e-12;       // |y| at an accepted switching-line hit
  double departure_eta = 1e-8;    // band height of the departure guard
  double departure_t_min = 1e-6;  // time criterion of the departure guard
  double max_time = 100.0;

  void validate() const;
  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

/// The absolute tolerance actually used is max(abs_tol, factor·eps·Σ|terms of
/// Y| at the start point), so it follows the rounding noise of the field.
inline constexpr double kRoundoffTolFactor = 64.0;
inline constexpr int kMaxIntegrationSteps = 1'000'000;

enum class Direction { Forward, Backward };

using PlaneState = std::array<double, 2>;

struct SigmaHit {
  double x_return = 0.0;
  double t_return = 0.0;  // elapsed time in the chosen direction
  std::vector<PlaneState> trajectory;
};

/// Abscissa window on the switching line: center ± radius.
struct Window {
  double center = 0.0;
  double radius = 0.0;
  friend bool operator==(const Window&, const Window&) = default;
};

/// Integrate until the orbit returns to y = 0.
///
/// The return event is the first sign change of y after the orbit has left
/// the line: either y has been seen with its departure sign, or
/// |y| > departure_eta, or t > departure_t_min. The crossing is bracketed on
/// the dense output, bisected, and polished by Newton iterations on fresh
/// single steps from the last accepted point.
///
/// With a window, leaving the box |x − center| ≤ 2r, |y| ≤ 2r raises NotInWindow.
SigmaHit integrate_to_sigma(const SmoothField& f, PlaneState start, Direction dir, const IntegratorConfig& cfg,
                            std::optional<Window> window = std::nullopt);

/// φ_side(x): the other endpoint on y = 0 of the orbit arc of the given side
/// through (x, 0). Contact points (Y(x,0) = 0) map to themselves.
double half_return(const PiecewiseField& z, Side side, double x, const IntegratorConfig& cfg,
                   std::optional<Window> window = std::nullopt);

struct ReturnSample {
  double x = 0.0;
  double phi_plus = 0.0;
  double phi_minus = 0.0;
  double delta_value = 0.0;  // δ·(φ+ − φ−)
};

/// Δ(x) = δ(φ+(x) − φ−(x)) with δ = sign X+(base, 0).
ReturnSample displacement(const PiecewiseField& z, double x, const IntegratorConfig& cfg, double base = 0.0,
                          std::optional<Window> window = std::nullopt);

struct LyapunovEstimate {
  int order = 0;             // 2ℓ; 0 when a center is declared
  double coefficient = 0.0;  // V_{2ℓ}
  double slope = 0.0;        // raw log-log slope
  double fit_r2 = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  bool center = false;
  std::vector<ReturnSample> samples;
};

/// Fit log|Δ| against log(x − base) on a geometric grid of `points` abscissas
/// in [base + u_min, base + u_max].
LyapunovEstimate estimate_lyapunov(const PiecewiseField& z, double u_min, double u_max, const IntegratorConfig& cfg,
                                   double base = 0.0, int points = 20);

inline constexpr double kLyapunovMinR2 = 0.999;
inline constexpr double kLyapunovMaxOrderOffset = 0.15;

}  // namespace foldcycle
