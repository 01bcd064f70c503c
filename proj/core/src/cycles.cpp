#include "foldcycle/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

namespace foldcycle {

std::string_view to_string(Stability s) { return s == Stability::Stable ? "stable" : "unstable"; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

bool recoverable(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotInWindow:
    case ErrorCode::NoReturn:
    case ErrorCode::StepFailure:
      return true;
    default:
      return false;
  }
}

IntegratorConfig cycle_config(const IntegratorConfig& cfg) {
  IntegratorConfig c = cfg;
  c.rel_tol = std::min(cfg.rel_tol, kCycleRelTol);
  return c;
}

// Δ in coordinates centred on the window.
struct LocalDisplacement {
  PiecewiseField zl;
  IntegratorConfig cfg;
  Window window;

  ReturnSample sample(double u) const { return displacement(zl, u, cfg, 0.0, window); }
  double operator()(double u) const { return sample(u).delta_value; }
};

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g;
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < n; ++i) g.push_back(lo * std::exp(ratio * i / (n - 1)));
  return g;
}

struct Scan {
  std::vector<double> u;
  std::vector<std::optional<double>> delta;
};

Scan scan_delta(const LocalDisplacement& f, const std::vector<double>& grid) {
  Scan s;
  for (double u : grid) {
    s.u.push_back(u);
    try {
      s.delta.emplace_back(f(u));
    } catch (const Error& e) {
      if (!recoverable(e)) throw;
      s.delta.emplace_back(std::nullopt);
    }
  }
  return s;
}

std::vector<std::pair<double, double>> sign_change_brackets(const Scan& s) {
  std::vector<std::pair<double, double>> out;
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    if (!s.delta[i]) continue;
    if (prev && sign_of(*s.delta[*prev]) * sign_of(*s.delta[i]) < 0) out.emplace_back(s.u[*prev], s.u[i]);
    prev = i;
  }
  return out;
}

double lower_bound_u(double b, double radius) {
  return std::max(std::abs(b) * (1.0 + 1e-3), radius * 1e-6);
}

}  // namespace

CycleSearch find_cycles_local(const PiecewiseField& zb, double window_center, double radius, double b,
                              const IntegratorConfig& cfg, int scan_points) {
  if (!(radius > 0.0) || scan_points < 3) {
    throw Error(ErrorCode::InvalidArgument, "cycle search needs a positive radius and >= 3 scan points");
  }
  const double u_lo = lower_bound_u(b, radius);
  if (!(u_lo < radius)) {
    throw Error(ErrorCode::ScaleSeparationViolated, "|b| is not below the window radius");
  }
  const LocalDisplacement f{zb.shift_x(window_center), cycle_config(cfg), Window{0.0, radius}};
  const Scan scan = scan_delta(f, geometric_grid(u_lo, radius, scan_points));

  CycleSearch out;
  out.defined_samples = static_cast<int>(std::count_if(scan.delta.begin(), scan.delta.end(),
                                                       [](const auto& v) { return v.has_value(); }));
  out.center = out.defined_samples > 0 && std::all_of(scan.delta.begin(), scan.delta.end(), [&](const auto& v) {
                 return !v || std::abs(*v) < 10.0 * cfg.event_tol;
               });
  if (out.center) return out;

  for (auto [lo, hi] : sign_change_brackets(scan)) {
    std::uintmax_t iters = 200;
    const auto tol = [](double a, double c) {
      return std::abs(a - c) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(c));
    };
    double u_star = 0.0;
    try {
      const auto [a, c] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
      const double fa = std::abs(f(a));
      const double fc = std::abs(f(c));
      u_star = fa <= fc ? a : c;
    } catch (const Error& e) {
      if (!recoverable(e)) throw;
      throw Error(ErrorCode::Inconclusive, std::string("displacement undefined inside a bracket: ") + e.what());
    }

    const ReturnSample at = f.sample(u_star);
    const double h = kDerivativeStepFraction * radius;
    const double deriv = (f(u_star + h) - f(u_star - h)) / (2.0 * h);
    if (std::abs(deriv) <= kHyperbolicityThreshold) {
      out.non_hyperbolic.push_back(window_center + u_star);
      continue;
    }
    LimitCycle c;
    c.x_star = window_center + u_star;
    c.x_left = window_center + at.phi_plus;
    c.b = b;
    c.window_center = window_center;
    c.amplitude = u_star;
    c.derivative = deriv;
    c.residual = std::abs(at.delta_value);
    c.stability = deriv < 0.0 ? Stability::Stable : Stability::Unstable;
    for (const auto& seg : sigma_regions(zb, c.x_left, c.x_star)) {
      if (!is_sliding(seg.kind)) continue;
      if (c.sliding_segments == 0) c.enclosed_segment = seg;
      ++c.sliding_segments;
    }
    out.cycles.push_back(c);
  }
  return out;
}

PseudoHopfPrediction make_prediction(int ell, double V2ell, int delta) {
  if (ell < 1 || V2ell == 0.0 || (delta != 1 && delta != -1)) {
    throw Error(ErrorCode::InvalidArgument, "prediction needs ell >= 1, V != 0 and delta = +-1");
  }
  PseudoHopfPrediction p;
  p.ell = ell;
  p.V2ell = V2ell;
  p.delta = delta;
  p.mu = -sign_of(delta * V2ell);
  p.y0 = std::pow(std::abs(2.0 * delta / V2ell), 1.0 / (2 * ell));
  return p;
}

double amplitude_prediction(const PseudoHopfPrediction& p, double b) {
  if (!(p.mu * b > 0.0)) {
    throw Error(ErrorCode::WrongSign, "mu*b must be positive (mu = " + std::to_string(p.mu) + ")");
  }
  return std::pow(p.mu * b, 1.0 / (2 * p.ell)) * p.y0;
}

PseudoHopfPrediction predict_pseudo_hopf(const PiecewiseField& z, const IntegratorConfig& cfg, double radius) {
  const MonodromyData d = classify_mts(z);
  if (std::abs(d.V2) > 1e-10) return make_prediction(1, d.V2, d.delta);
  const LyapunovEstimate est = estimate_lyapunov(z, radius / 100.0, radius / 5.0, cycle_config(cfg));
  if (est.center) throw Error(ErrorCode::Inconclusive, "displacement vanishes on the window: center");
  return make_prediction(est.order / 2, est.coefficient, d.delta);
}

ScanTable pseudo_hopf_scan(const PiecewiseField& z, const std::vector<double>& b_values, ShiftConvention convention,
                           const IntegratorConfig& cfg, double radius) {
  ScanTable table;
  table.convention = convention;
  table.radius = radius;
  table.prediction = predict_pseudo_hopf(z, cfg, radius);

  std::vector<std::future<ScanRow>> jobs;
  for (double b : b_values) {
    jobs.push_back(std::async(std::launch::async, [&, b] {
      ScanRow row;
      row.b = b;
      const PiecewiseField zb = apply_shift(z, b, convention);
      const double b_minus = convention == ShiftConvention::Minus ? b : -b;
      row.sliding_kind = b_minus == 0.0 ? SegmentKind::Crossing : sigma_kind_at(zb, b_minus / 2.0);
      const CycleSearch s = find_cycles_local(zb, 0.0, radius, b, cfg);
      row.cycles = s.cycles;
      row.non_hyperbolic = s.non_hyperbolic;
      row.n_cycles = static_cast<int>(s.cycles.size());
      row.amplitude = s.cycles.empty() ? kNaN : s.cycles.front().amplitude;
      if (!s.cycles.empty()) row.stability = s.cycles.front().stability;
      row.predicted_amplitude =
          table.prediction.mu * b_minus > 0.0 ? amplitude_prediction(table.prediction, b_minus) : kNaN;
      return row;
    }));
  }
  for (auto& j : jobs) table.rows.push_back(j.get());
  return table;
}

CensusReport cycle_census(const PiecewiseField& z, const UnfoldingParams& params, const IntegratorConfig& cfg,
                          double radius_cap) {
  validate_lambda(params.k, params.lambda);
  if (!lambda_is_ordered(params.lambda)) {
    throw Error(ErrorCode::InvalidLambda, "lambda must satisfy a_1 < 0 < a_2 < ... < a_{2k-2}");
  }
  if (!(radius_cap > 0.0)) throw Error(ErrorCode::InvalidArgument, "window radius must be positive");
  const MonodromyData d = classify_mts(z);
  if (std::abs(d.V2) < 1e-12) throw Error(ErrorCode::InvalidArgument, "V2 vanishes; the census needs V2 != 0");

  CensusReport rep;
  rep.k = params.k;
  rep.b = params.b;
  rep.convention = params.shift;
  rep.expected_count = params.k;

  UnfoldingParams unshifted = params;
  unshifted.b = 0.0;
  const PiecewiseField z0 = unfolded_field(z, unshifted);
  const PiecewiseField zb = unfolded_field(z, params);

  double radius = radius_cap;
  if (params.k > 1) {
    std::vector<double> nodes{0.0};
    nodes.insert(nodes.end(), params.lambda.begin(), params.lambda.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) gap = std::min(gap, std::abs(nodes[i] - nodes[j]));
    }
    radius = std::min(params.epsilon * gap / 3.0, radius_cap);
  }

  const double b_minus = params.shift == ShiftConvention::Minus ? params.b : -params.b;
  std::vector<double> centers;
  if (params.k == 1) {
    centers.push_back(0.0);
  } else {
    for (int idx : invisible_indices(params.k)) {
      centers.push_back(params.epsilon * params.lambda[static_cast<std::size_t>(idx - 1)]);
    }
  }
  for (double c : centers) {
    CensusWindow w;
    w.center = c;
    w.radius = radius;
    w.local_V2 = params.k == 1 ? d.V2 : local_V2(z0, c);
    const PseudoHopfPrediction p = make_prediction(1, w.local_V2, d.delta);
    const double reach = std::sqrt(std::abs(params.b)) * p.y0;
    if (!(reach < radius / 2.0)) {
      throw Error(ErrorCode::ScaleSeparationViolated,
                  "predicted amplitude " + std::to_string(reach) + " at x = " + std::to_string(c) +
                      " is not below half the window radius " + std::to_string(radius));
    }
    w.predicted_amplitude = p.mu * b_minus > 0.0 ? amplitude_prediction(p, b_minus) : kNaN;
    rep.windows.push_back(w);
  }

  std::vector<std::future<CycleSearch>> jobs;
  for (const auto& w : rep.windows) {
    jobs.push_back(std::async(std::launch::async,
                              [&, w] { return find_cycles_local(zb, w.center, w.radius, params.b, cfg); }));
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const CycleSearch s = jobs[i].get();
    rep.windows[i].cycles_found = static_cast<int>(s.cycles.size());
    rep.cycles.insert(rep.cycles.end(), s.cycles.begin(), s.cycles.end());
    rep.non_hyperbolic.insert(rep.non_hyperbolic.end(), s.non_hyperbolic.begin(), s.non_hyperbolic.end());
  }

  // Visible folds sit at odd positions of the sorted ladder.
  const std::vector<double> ladder = contact_abscissas(params);
  for (std::size_t pos = 1; pos < ladder.size(); pos += 2) {
    const LocalDisplacement f{zb.shift_x(ladder[pos]), cycle_config(cfg), Window{0.0, radius}};
    const Scan s = scan_delta(f, geometric_grid(lower_bound_u(params.b, radius), radius, 12));
    if (!sign_change_brackets(s).empty()) rep.visible_fold_sign_changes.push_back(ladder[pos]);
  }

  const Stability expected = d.V2 < 0.0 ? Stability::Stable : Stability::Unstable;
  if (static_cast<int>(rep.cycles.size()) != rep.expected_count) {
    rep.diagnostics.push_back("found " + std::to_string(rep.cycles.size()) + " cycles, expected " +
                              std::to_string(rep.expected_count));
  }
  if (!rep.non_hyperbolic.empty()) rep.diagnostics.push_back("non-hyperbolic roots present");
  if (!rep.visible_fold_sign_changes.empty()) rep.diagnostics.push_back("displacement sign change near a visible fold");
  for (const auto& c : rep.cycles) {
    const std::string at = "cycle at x* = " + std::to_string(c.x_star) + ": ";
    if (c.stability != expected) rep.diagnostics.push_back(at + "stability " + std::string(to_string(c.stability)));
    if (c.residual >= kCycleResidualTol) rep.diagnostics.push_back(at + "root residual too large");
    if (c.sliding_segments != 1 || !c.enclosed_segment.lo_is_contact || !c.enclosed_segment.hi_is_contact) {
      rep.diagnostics.push_back(at + "encloses " + std::to_string(c.sliding_segments) + " sliding segments");
    }
    if (!(c.amplitude > std::abs(c.b))) rep.diagnostics.push_back(at + "amplitude not above |b|");
  }
  std::vector<std::pair<double, double>> chords;
  for (const auto& c : rep.cycles) chords.emplace_back(c.x_left, c.x_star);
  std::sort(chords.begin(), chords.end());
  for (std::size_t i = 1; i < chords.size(); ++i) {
    if (chords[i].first <= chords[i - 1].second) rep.diagnostics.push_back("cycle chords overlap");
  }
  rep.pass = rep.diagnostics.empty();
  return rep;
}

}  // namespace foldcycle
