#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "foldcycle/flow.hpp"
#include "foldcycle/unfold.hpp"

namespace foldcycle {

enum class Stability { Stable, Unstable };
std::string_view to_string(Stability s);

struct LimitCycle {
  double x_star = 0.0;  // right endpoint of the cycle on the switching line
  double x_left = 0.0;  // φ+(x_star) ≈ φ−(x_star)
  double b = 0.0;
  double window_center = 0.0;
  double amplitude = 0.0;  // x_star − window_center
  Stability stability = Stability::Unstable;
  double derivative = 0.0;  // Δ'(x_star)
  double residual = 0.0;    // |Δ(x_star)|
  int sliding_segments = 0;  // sliding pieces inside the chord (x_left, x_star)
  SigmaSegment enclosed_segment;
};

struct CycleSearch {
  std::vector<LimitCycle> cycles;
  std::vector<double> non_hyperbolic;  // roots rejected by the |Δ'| threshold
  bool center = false;
  int defined_samples = 0;
};

inline constexpr int kCycleScanPoints = 50;
inline constexpr double kHyperbolicityThreshold = 1e-8;
inline constexpr double kCycleResidualTol = 1e-10;
inline constexpr double kDerivativeStepFraction = 1e-6;
inline constexpr double kCycleRelTol = 1e-12;

/// Roots of u ↦ Δ(center + u; b) for u ∈ (max(|b|(1+1e-3), 1e-6·radius), radius),
/// found by a geometric sign scan and bracketed refinement. Integration runs
/// in coordinates centred on the window with rel_tol at most kCycleRelTol.
CycleSearch find_cycles_local(const PiecewiseField& zb, double window_center, double radius, double b,
                              const IntegratorConfig& cfg, int scan_points = kCycleScanPoints);

struct PseudoHopfPrediction {
  int ell = 1;
  double V2ell = 0.0;
  int delta = 1;
  int mu = 1;  // −sign(δ·V_{2ℓ})
  double y0 = 0.0;
};

PseudoHopfPrediction make_prediction(int ell, double V2ell, int delta);

/// (μb)^{1/2ℓ}·y0; WrongSign when μb ≤ 0. b is taken in the minus convention.
double amplitude_prediction(const PseudoHopfPrediction& p, double b);

/// Leading coefficient from the closed-form V2, or from estimate_lyapunov
/// on (radius/100, radius/5) when V2 vanishes.
PseudoHopfPrediction predict_pseudo_hopf(const PiecewiseField& z, const IntegratorConfig& cfg, double radius);

struct ScanRow {
  double b = 0.0;
  int n_cycles = 0;
  std::optional<Stability> stability;
  SegmentKind sliding_kind = SegmentKind::Crossing;
  double amplitude = 0.0;            // NaN without a cycle
  double predicted_amplitude = 0.0;  // NaN when μb ≤ 0
  std::vector<LimitCycle> cycles;
  std::vector<double> non_hyperbolic;
};

struct ScanTable {
  ShiftConvention convention = ShiftConvention::Minus;
  PseudoHopfPrediction prediction;
  double radius = 0.0;
  std::vector<ScanRow> rows;
};

/// One cycle search per b around the base singularity at the origin. Rows are
/// computed concurrently and returned in input order.
ScanTable pseudo_hopf_scan(const PiecewiseField& z, const std::vector<double>& b_values, ShiftConvention convention,
                           const IntegratorConfig& cfg, double radius);

struct CensusWindow {
  double center = 0.0;
  double radius = 0.0;
  double local_V2 = 0.0;
  double predicted_amplitude = 0.0;  // NaN for the non-producing sign of b
  int cycles_found = 0;
};

struct CensusReport {
  int k = 0;
  double b = 0.0;
  ShiftConvention convention = ShiftConvention::Minus;
  std::vector<CensusWindow> windows;
  std::vector<LimitCycle> cycles;
  std::vector<double> non_hyperbolic;
  std::vector<double> visible_fold_sign_changes;  // Δ sign changes seen near visible folds
  int expected_count = 0;
  bool pass = false;
  std::vector<std::string> diagnostics;
};

/// Unfolds and shifts z per params, then searches every invisible two-fold
/// window. Window radius is min(ε·gap/3, radius_cap) with gap the minimum
/// spacing of {0} ∪ Λ; for k = 1 it is radius_cap. ScaleSeparationViolated if
/// a predicted amplitude reaches half the window radius.
CensusReport cycle_census(const PiecewiseField& z, const UnfoldingParams& params, const IntegratorConfig& cfg,
                          double radius_cap);

}  // namespace foldcycle
