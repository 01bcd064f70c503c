#include "foldcycle_app/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "foldcycle/version.hpp"

namespace foldcycle::app {

using nlohmann::json;

namespace {

json poly1_json(const Poly1& p) {
  json out = json::array();
  for (int i = 0; i <= p.degree(); ++i) out.push_back(p[i]);
  return out;
}

json lemma_side_json(const Lemma1Side& s) {
  return {{"C", s.C},
          {"dC", s.dC},
          {"s1", s.s1},
          {"s2", s.s2},
          {"s3", s.s3},
          {"s4", s.s4},
          {"s2_residual", s.s2_residual},
          {"s4_residual", s.s4_residual},
          {"T_residual", s.T_residual},
          {"U_residual", s.U_residual}};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json to_json(const MonodromyData& d) {
  return {{"k_plus", d.k_plus},       {"k_minus", d.k_minus},   {"delta", d.delta},
          {"a_plus", d.a_plus},       {"a_minus", d.a_minus},   {"f0_plus", d.f0_plus},
          {"f0_minus", d.f0_minus},   {"g00_plus", d.g00_plus}, {"g00_minus", d.g00_minus},
          {"alpha2_plus", d.alpha2_plus}, {"alpha2_minus", d.alpha2_minus}, {"V2", d.V2}};
}

json to_json(const ReturnSample& s) {
  return {{"x", s.x}, {"phi_plus", s.phi_plus}, {"phi_minus", s.phi_minus}, {"delta", s.delta_value}};
}

json to_json(const LyapunovEstimate& e) {
  json samples = json::array();
  for (const auto& s : e.samples) samples.push_back(to_json(s));
  return {{"order", e.order},   {"coefficient", e.coefficient}, {"slope", e.slope}, {"fit_r2", e.fit_r2},
          {"x_min", e.x_min},   {"x_max", e.x_max},             {"center", e.center}, {"samples", samples}};
}

json to_json(const PerturbationPolys& p) {
  return {{"p_plus", poly1_json(p.p_plus)},
          {"p_minus", poly1_json(p.p_minus)},
          {"scaled_plus", p.scaled_plus},
          {"scaled_minus", p.scaled_minus},
          {"norm_plus", p.norm_plus},
          {"norm_minus", p.norm_minus},
          {"method_disagreement", p.method_disagreement}};
}

json to_json(const LadderReport& r) {
  json contacts = json::array();
  for (const auto& e : r.contacts) {
    contacts.push_back({{"x0", e.x0},
                        {"residual_plus", e.residual_plus},
                        {"residual_minus", e.residual_minus},
                        {"multiplicity_plus", e.multiplicity_plus},
                        {"multiplicity_minus", e.multiplicity_minus},
                        {"visibility_plus", to_string(e.visibility_plus)},
                        {"visibility_minus", to_string(e.visibility_minus)},
                        {"expected", to_string(e.expected)},
                        {"ok", e.ok}});
  }
  return {{"contacts", contacts},
          {"extra_roots_plus", r.extra_roots_plus},
          {"extra_roots_minus", r.extra_roots_minus},
          {"pass", r.pass},
          {"failures", r.failures}};
}

json to_json(const Lemma1Report& r) {
  json cross = json::array();
  for (const auto& c : r.cross_side_residuals) cross.push_back({{"s1", c[0]}, {"s2", c[1]}, {"s3", c[2]}, {"s4", c[3]}});
  return {{"k", r.k},
          {"lambda", r.lambda},
          {"alpha", r.alpha},
          {"exact", r.exact},
          {"plus", lemma_side_json(r.plus)},
          {"minus", lemma_side_json(r.minus)},
          {"cross_side_residuals", cross},
          {"f0_ratio_checks_skipped", r.f0_ratio_checks_skipped},
          {"max_residual", r.max_residual}};
}

json to_json(const V2LimitReport& r) {
  json idx = json::array();
  for (const auto& e : r.indices) {
    idx.push_back({{"index", e.index},
                   {"a", e.a},
                   {"epsilons", e.epsilons},
                   {"values", e.values},
                   {"errors", e.errors},
                   {"order", std::isfinite(e.order) ? json(e.order) : json("inf")},
                   {"K", e.K},
                   {"ok", e.ok}});
  }
  return {{"V2", r.V2}, {"limit", r.limit}, {"indices", idx}, {"pass", r.pass}, {"failures", r.failures}};
}

json to_json(const SigmaSegment& s) {
  return {{"x_lo", s.x_lo},
          {"x_hi", s.x_hi},
          {"kind", to_string(s.kind)},
          {"lo_is_contact", s.lo_is_contact},
          {"hi_is_contact", s.hi_is_contact}};
}

json to_json(const LimitCycle& c) {
  return {{"x_star", c.x_star},
          {"x_left", c.x_left},
          {"b", c.b},
          {"window_center", c.window_center},
          {"amplitude", c.amplitude},
          {"stability", to_string(c.stability)},
          {"derivative", c.derivative},
          {"residual", c.residual},
          {"sliding_segments", c.sliding_segments},
          {"enclosed_segment", to_json(c.enclosed_segment)}};
}

json to_json(const UnfoldingParams& p) {
  return {{"k", p.k}, {"lambda", p.lambda}, {"epsilon", p.epsilon}, {"b", p.b}, {"shift", to_string(p.shift)}};
}

json to_json(const CensusReport& r) {
  json windows = json::array();
  for (const auto& w : r.windows) {
    windows.push_back({{"center", w.center},
                       {"radius", w.radius},
                       {"local_V2", w.local_V2},
                       {"predicted_amplitude", w.predicted_amplitude},
                       {"cycles_found", w.cycles_found}});
  }
  json cycles = json::array();
  for (const auto& c : r.cycles) cycles.push_back(to_json(c));
  return {{"k", r.k},
          {"b", r.b},
          {"convention", to_string(r.convention)},
          {"windows", windows},
          {"cycles", cycles},
          {"non_hyperbolic", r.non_hyperbolic},
          {"visible_fold_sign_changes", r.visible_fold_sign_changes},
          {"expected_count", r.expected_count},
          {"pass", r.pass},
          {"diagnostics", r.diagnostics}};
}

json to_json(const ScanTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json cycles = json::array();
    for (const auto& c : r.cycles) cycles.push_back(to_json(c));
    rows.push_back({{"b", r.b},
                    {"n_cycles", r.n_cycles},
                    {"stability", r.stability ? json(to_string(*r.stability)) : json("none")},
                    {"sliding_kind", to_string(r.sliding_kind)},
                    {"amplitude", r.amplitude},
                    {"predicted_amplitude", r.predicted_amplitude},
                    {"cycles", cycles},
                    {"non_hyperbolic", r.non_hyperbolic}});
  }
  const auto& p = t.prediction;
  return {{"convention", to_string(t.convention)},
          {"radius", t.radius},
          {"prediction", {{"ell", p.ell}, {"V2ell", p.V2ell}, {"delta", p.delta}, {"mu", p.mu}, {"y0", p.y0}}},
          {"rows", rows}};
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Mismatch: return "mismatch";
    case Status::Error: return "error";
  }
  return "error";
}

json run_report(const std::string& scenario, const std::string& command, Status status,
                const std::vector<std::string>& diagnostics, json payload) {
  return {{"scenario", scenario},
          {"command", command},
          {"timestamp", utc_now()},
          {"tool_version", std::string(kVersion)},
          {"status", to_string(status)},
          {"diagnostics", diagnostics},
          {"payload", std::move(payload)}};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string delta_csv(const std::vector<ReturnSample>& samples) {
  std::ostringstream out;
  out << "x,delta\n";
  for (const auto& s : samples) out << format_number(s.x) << ',' << format_number(s.delta_value) << '\n';
  return out.str();
}

std::string scan_csv(const ScanTable& t) {
  std::ostringstream out;
  out << "b,n_cycles,stability,sliding_kind,amplitude,predicted_amplitude\n";
  for (const auto& r : t.rows) {
    out << format_number(r.b) << ',' << r.n_cycles << ',' << (r.stability ? to_string(*r.stability) : "none") << ','
        << to_string(r.sliding_kind) << ',' << format_number(r.amplitude) << ','
        << format_number(r.predicted_amplitude) << '\n';
  }
  return out.str();
}

}  // namespace foldcycle::app
