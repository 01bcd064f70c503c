#include "foldcycle_app/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include "foldcycle/cycles.hpp"
#include "foldcycle_app/portrait.hpp"
#include "foldcycle_app/report.hpp"
#include "foldcycle_app/scenario.hpp"

namespace foldcycle::app {

using nlohmann::json;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> list{"classify",        "lyapunov", "unfold", "verify-ladder",
                                             "verify-lemma1",   "verify-v2-limit", "cycles", "scan",
                                             "delta-dump",      "portrait"};
  return list;
}

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Input: return kExitInput;
    case ErrorCategory::Numerical: return kExitNumerical;
    case ErrorCategory::Verification: return kExitMismatch;
  }
  return kExitNumerical;
}

namespace {

struct Outcome {
  Status status = Status::Ok;
  std::vector<std::string> diagnostics;
  json payload = json::object();
};

struct Context {
  const Scenario& s;
  const RunOptions& opts;
  std::filesystem::path dir;

  void write(const std::string& suffix, const std::string& content) const {
    const auto path = dir / (s.name + "." + suffix);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << content;
  }
};

const UnfoldingParams& need_unfold(const Scenario& s) {
  if (!s.unfold) throw Error(ErrorCode::InvalidArgument, "this command needs an 'unfold' block");
  return *s.unfold;
}

Outcome cmd_classify(const Context& c) {
  Outcome o;
  o.payload = to_json(classify_mts(c.s.field));
  return o;
}

Outcome cmd_lyapunov(const Context& c) {
  Outcome o;
  const double r = c.s.window.radius;
  const LyapunovEstimate est = estimate_lyapunov(c.s.field, r / 100.0, r / 5.0, c.s.integrator, c.s.window.center);
  o.payload["estimate"] = to_json(est);
  try {
    o.payload["closed_form_V2"] = classify_mts(c.s.field.shift_x(c.s.window.center)).V2;
  } catch (const Error& e) {
    o.payload["closed_form_V2"] = nullptr;
    o.diagnostics.push_back(std::string("closed form unavailable: ") + e.what());
  }
  return o;
}

Outcome cmd_unfold(const Context& c) {
  Outcome o;
  const UnfoldingParams& p = need_unfold(c.s);
  const PerturbationPolys polys = build_perturbation(c.s.field, p);
  const PiecewiseField zu = unfolded_field(c.s.field, p);
  o.payload["params"] = to_json(p);
  o.payload["perturbation"] = to_json(polys);
  if (p.k > 1) {
    const XiValues xi = xi_values(c.s.field, classify_mts(c.s.field), p.lambda, p.epsilon);
    o.payload["xi_plus"] = xi.plus;
    o.payload["xi_minus"] = xi.minus;
  }
  o.payload["contacts"] = contact_abscissas(p);
  o.payload["unfolded_field"] = {{"upper", {{"X", poly_to_json(zu.upper.X)}, {"Y", poly_to_json(zu.upper.Y)}}},
                                 {"lower", {{"X", poly_to_json(zu.lower.X)}, {"Y", poly_to_json(zu.lower.Y)}}}};
  return o;
}

Outcome cmd_verify_ladder(const Context& c) {
  Outcome o;
  const UnfoldingParams& p = need_unfold(c.s);
  const LadderReport rep = verify_contact_ladder(unfolded_field(c.s.field, p), p);
  o.payload = to_json(rep);
  if (!rep.pass) {
    o.status = Status::Mismatch;
    o.diagnostics = rep.failures;
  }
  return o;
}

// Λ draws from [−3, 3] with |a_i| ≥ 0.2 and pairwise gaps ≥ 0.2, sorted so
// a_1 < 0 < a_2 < … when possible.
std::vector<double> draw_lambda(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const std::size_t n = static_cast<std::size_t>(2 * k - 2);
  std::vector<double> lam;
  while (lam.size() < n) {
    const double a = u(rng);
    if (std::abs(a) < 0.2) continue;
    if (std::any_of(lam.begin(), lam.end(), [&](double b) { return std::abs(a - b) < 0.2; })) continue;
    lam.push_back(a);
  }
  return lam;
}

Outcome cmd_verify_lemma1(const Context& c) {
  Outcome o;
  const UnfoldingParams& p = need_unfold(c.s);
  const Lemma1Report num = lemma1_check(c.s.field, p.k, p.lambda, false);
  const Lemma1Report ex = lemma1_check(c.s.field, p.k, p.lambda, true);
  o.payload["numerical"] = to_json(num);
  o.payload["exact"] = to_json(ex);
  double worst = std::max(num.max_residual, ex.max_residual);
  if (c.opts.seed && p.k >= 2) {
    std::mt19937_64 rng(*c.opts.seed);
    json draws = json::array();
    double draw_max = 0.0;
    for (int i = 0; i < 50; ++i) {
      const std::vector<double> lam = draw_lambda(p.k, rng);
      const Lemma1Report r = lemma1_check(c.s.field, p.k, lam, false);
      draws.push_back({{"lambda", lam}, {"max_residual", r.max_residual}});
      draw_max = std::max(draw_max, r.max_residual);
    }
    o.payload["random_draws"] = {{"seed", *c.opts.seed}, {"max_residual", draw_max}, {"draws", draws}};
    worst = std::max(worst, draw_max);
  }
  o.payload["max_residual"] = worst;
  if (!(worst < kLemma1ResidualTol)) {
    o.status = Status::Mismatch;
    o.diagnostics.push_back("max residual " + format_number(worst) + " exceeds " + format_number(kLemma1ResidualTol));
  }
  return o;
}

Outcome cmd_verify_v2_limit(const Context& c) {
  Outcome o;
  const V2LimitReport rep = local_V2_limit_check(c.s.field, need_unfold(c.s));
  o.payload = to_json(rep);
  if (!rep.pass) {
    o.status = Status::Mismatch;
    o.diagnostics = rep.failures;
  }
  return o;
}

Outcome cmd_cycles(const Context& c) {
  Outcome o;
  const CensusReport rep = cycle_census(c.s.field, need_unfold(c.s), c.s.integrator, c.s.window.radius);
  o.payload = to_json(rep);
  if (!rep.pass) {
    o.status = Status::Mismatch;
    o.diagnostics = rep.diagnostics;
  }
  return o;
}

Outcome cmd_scan(const Context& c) {
  Outcome o;
  std::vector<double> bs = c.s.scan_b;
  if (c.opts.b) bs = {*c.opts.b};
  if (bs.empty()) throw Error(ErrorCode::InvalidArgument, "scan needs 'scan_b' in the scenario or --b");
  const ShiftConvention conv = c.s.unfold ? c.s.unfold->shift : ShiftConvention::Minus;
  const ScanTable t = pseudo_hopf_scan(c.s.field, bs, conv, c.s.integrator, c.s.window.radius);
  o.payload = to_json(t);
  c.write("scan.csv", scan_csv(t));
  return o;
}

Outcome cmd_delta_dump(const Context& c) {
  Outcome o;
  const PiecewiseField z = effective_field(c.s);
  const Window w = c.s.window;
  std::vector<ReturnSample> samples;
  const double lo = w.radius / 100.0;
  for (int i = 0; i < c.s.samples; ++i) {
    const double u = lo * std::pow(w.radius / lo, static_cast<double>(i) / (c.s.samples - 1));
    try {
      samples.push_back(displacement(z, w.center + u, c.s.integrator, w.center, w));
    } catch (const Error& e) {
      if (category(e.code()) != ErrorCategory::Numerical) throw;
      o.diagnostics.push_back("x = " + format_number(w.center + u) + ": " + e.what());
    }
  }
  json arr = json::array();
  for (const auto& s : samples) arr.push_back(to_json(s));
  o.payload["samples"] = arr;
  c.write("delta-dump.csv", delta_csv(samples));
  return o;
}

Outcome cmd_portrait(const Context& c) {
  Outcome o;
  const PiecewiseField z = effective_field(c.s);
  std::vector<LimitCycle> cycles;
  if (c.s.unfold && c.s.unfold->b != 0.0) {
    try {
      if (c.s.unfold->k == 1) {
        cycles = find_cycles_local(z, c.s.window.center, c.s.window.radius, c.s.unfold->b, c.s.integrator).cycles;
      } else {
        cycles = cycle_census(c.s.field, *c.s.unfold, c.s.integrator, c.s.window.radius).cycles;
      }
    } catch (const Error& e) {
      o.diagnostics.push_back(std::string("cycle search: ") + e.what());
    }
  }
  const Portrait p = build_portrait(z, c.s.window, cycles, c.s.integrator);
  o.diagnostics.insert(o.diagnostics.end(), p.diagnostics.begin(), p.diagnostics.end());
  c.write("portrait.svg", portrait_svg(p, c.s.name));
  c.write("portrait.csv", portrait_csv(p));
  json cyc = json::array();
  for (const auto& l : cycles) cyc.push_back(to_json(l));
  int folds = 0, sliding = 0;
  for (const auto& l : p.lines) {
    folds += l.kind == "fold";
    sliding += l.kind == "sigma-sliding";
  }
  o.payload = {{"polylines", p.lines.size()}, {"folds", folds}, {"sliding_segments", sliding}, {"cycles", cyc}};
  return o;
}

Outcome dispatch(const Context& c) {
  const std::string& cmd = c.opts.command;
  if (cmd == "classify") return cmd_classify(c);
  if (cmd == "lyapunov") return cmd_lyapunov(c);
  if (cmd == "unfold") return cmd_unfold(c);
  if (cmd == "verify-ladder") return cmd_verify_ladder(c);
  if (cmd == "verify-lemma1") return cmd_verify_lemma1(c);
  if (cmd == "verify-v2-limit") return cmd_verify_v2_limit(c);
  if (cmd == "cycles") return cmd_cycles(c);
  if (cmd == "scan") return cmd_scan(c);
  if (cmd == "delta-dump") return cmd_delta_dump(c);
  if (cmd == "portrait") return cmd_portrait(c);
  throw Error(ErrorCode::InvalidArgument, "unknown command '" + cmd + "'");
}

void apply_overrides(Scenario& s, const RunOptions& opts) {
  if (opts.b || opts.epsilon || opts.shift) {
    if (!s.unfold) s.unfold = UnfoldingParams{};
    if (opts.b) s.unfold->b = *opts.b;
    if (opts.epsilon) s.unfold->epsilon = *opts.epsilon;
    if (opts.shift) s.unfold->shift = *opts.shift;
  }
  if (opts.out) s.outputs = opts.out->string();
}

}  // namespace

int run(const RunOptions& opts, std::ostream& err) {
  Scenario s;
  try {
    s = load_scenario(opts.config);
    apply_overrides(s, opts);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(category(e.code()));
  }

  const std::filesystem::path dir = s.outputs;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << dir << ": " << ec.message() << '\n';
    return kExitInput;
  }
  const Context ctx{s, opts, dir};

  Outcome o;
  int code = kExitOk;
  try {
    if (opts.dump_normalized) ctx.write("scenario.json", normalized_json(s).dump(2) + "\n");
    o = dispatch(ctx);
    if (o.status == Status::Mismatch) code = kExitMismatch;
  } catch (const Error& e) {
    o = Outcome{};
    o.status = Status::Error;
    o.diagnostics.push_back(e.what());
    code = exit_code(category(e.code()));
  } catch (const std::exception& e) {
    o = Outcome{};
    o.status = Status::Error;
    o.diagnostics.push_back(e.what());
    code = kExitNumerical;
  }
  for (const auto& d : o.diagnostics) err << (o.status == Status::Ok ? "note: " : "error: ") << d << '\n';

  try {
    ctx.write(opts.command + ".json", run_report(s.name, opts.command, o.status, o.diagnostics, o.payload).dump(2) + "\n");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return code;
}

}  // namespace foldcycle::app
