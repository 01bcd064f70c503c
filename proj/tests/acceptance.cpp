// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "foldcycle/cycles.hpp"
#include "support.hpp"

using namespace foldcycle;
using fct::loglog_slope;
using fct::sys_a;
using fct::sys_g;
namespace fs = std::filesystem;

namespace {

class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(10);
    s << what << ": got " << got << ", want " << want << " ± " << tol;
    expect(std::abs(got - want) <= tol, s.str());
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// Criterion 1: closed-form V2 for SYS-A(k,c).
void v2_closed_form(Checks& c) {
  for (int k = 1; k <= 3; ++k) {
    for (double cc : {-1.0, 0.5, 1.0}) {
      c.near(classify_mts(sys_a(k, cc)).V2, 2.0 * cc / (2 * k + 1), 1e-10,
             "V2 of SYS-A(" + std::to_string(k) + "," + fmt(cc) + ")");
    }
  }
}

// Criterion 2: Δ(x)/x² at x = 0.02 against V2.
void displacement_consistency(Checks& c) {
  const IntegratorConfig cfg;
  const double x = 0.02;
  for (int k : {1, 2}) {
    const double v2 = 2.0 / (2 * k + 1);
    c.near(displacement(sys_a(k, 1.0), x, cfg).delta_value / (x * x), v2, 0.02 * v2,
           "Δ/x² on SYS-A(" + std::to_string(k) + ",1)");
  }
}

// Criterion 3: closed-form P± and coefficient scaling.
void interpolation(Checks& c) {
  for (double cc : {1.0, 0.5, -1.0}) {
    for (double eps : {0.1, 0.01}) {
      const PerturbationPolys p = build_perturbation(sys_a(2, cc), UnfoldingParams{2, {-1.0, 1.0}, eps, 0.0});
      const std::string tag = " (c=" + fmt(cc) + ", ε=" + fmt(eps) + ")";
      c.near(p.p_plus[0], 0.0, 1e-10, "P+ constant" + tag);
      c.near(p.p_plus[1], eps * eps, 1e-10, "P+ linear" + tag);
      c.near(p.p_plus[2], -cc * eps * eps, 1e-10, "P+ quadratic" + tag);
      c.near(p.p_minus[0], 0.0, 1e-10, "P− constant" + tag);
      c.near(p.p_minus[1], -eps * eps, 1e-10, "P− linear" + tag);
      c.near(p.p_minus[2], 0.0, 1e-10, "P− quadratic" + tag);
    }
  }

  const std::vector<double> grid{0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
  // Λ = (−1, 1): C₁± ~ ε², C₂+ = −cε (exponent 1 times a factor vanishing at ε = 0).
  std::vector<double> c1p, c1m, c2p;
  for (double e : grid) {
    const PerturbationPolys p = build_perturbation(sys_a(2, 1.0), UnfoldingParams{2, {-1.0, 1.0}, e, 0.0});
    c1p.push_back(p.p_plus[1]);
    c1m.push_back(p.p_minus[1]);
    c2p.push_back(p.p_plus[2]);
  }
  c.near(loglog_slope(grid, c1p), 2.0, 0.05, "slope of C1+ for Λ=(−1,1)");
  c.near(loglog_slope(grid, c1m), 2.0, 0.05, "slope of C1− for Λ=(−1,1)");
  c.near(loglog_slope(grid, c2p), 2.0, 0.05, "slope of C2+ for Λ=(−1,1)");

  // Generic Λ: exact exponents where C_j(Λ, ε) is ε-independent, O(ε) convergence of the scaled coefficients otherwise.
  for (int k : {2, 3}) {
    const std::vector<double> lam = k == 2 ? std::vector<double>{-1.0, 2.0} : std::vector<double>{-1.0, 1.5, 2.0, 3.0};
    for (int j = 1; j <= 2 * k - 2; ++j) {
      std::vector<double> cm, cp;
      for (double e : grid) {
        const PerturbationPolys p = build_perturbation(sys_a(k, 1.0), UnfoldingParams{k, lam, e, 0.0});
        cm.push_back(p.p_minus[j]);
        cp.push_back(p.scaled_plus[static_cast<std::size_t>(j - 1)]);
      }
      const std::string tag = " (k=" + std::to_string(k) + ", j=" + std::to_string(j) + ")";
      c.near(loglog_slope(grid, cm), 2 * k - 1 - j, 0.05, "slope of C_j−" + tag);
      for (std::size_t i = 0; i + 2 < cp.size(); ++i) {
        c.near((cp[i] - cp[i + 1]) / (cp[i + 1] - cp[i + 2]), 2.0, 0.05, "O(ε) drift of scaled C_j+" + tag);
      }
    }
  }
}

// Criterion 4: contact ladder of the unfolded fields.
void ladder(Checks& c) {
  for (const UnfoldingParams& p :
       {UnfoldingParams{2, {-1.0, 1.0}, 0.1, 0.0}, UnfoldingParams{3, {-1.0, 1.0, 2.0, 3.0}, 0.05, 0.0}}) {
    const LadderReport r = verify_contact_ladder(unfolded_field(sys_a(p.k, 1.0), p), p);
    const std::string tag = " (k=" + std::to_string(p.k) + ")";
    c.expect(r.pass, "ladder report" + tag);
    c.expect(r.contacts.size() == static_cast<std::size_t>(2 * p.k - 1), "2k−1 contacts" + tag);
    const std::vector<double> xs = contact_abscissas(p);
    const std::vector<int> inv = invisible_indices(p.k);
    for (std::size_t i = 0; i < r.contacts.size() && i < xs.size(); ++i) {
      const LadderEntry& e = r.contacts[i];
      c.near(e.x0, xs[i], 1e-15, "contact abscissa" + tag);
      c.expect(e.residual_plus < kLadderResidualTol && e.residual_minus < kLadderResidualTol, "|Y| residual" + tag);
      c.expect(e.multiplicity_plus == 2 && e.multiplicity_minus == 2, "multiplicity 2" + tag);
      c.expect(e.visibility_plus == e.expected && e.visibility_minus == e.expected, "visibility pattern" + tag);
    }
    // Contacts ε a_i with i in the invisible index set are invisible, the rest visible.
    for (std::size_t i = 0; i < p.lambda.size(); ++i) {
      const double x0 = p.epsilon * p.lambda[i];
      const bool want_invisible = std::find(inv.begin(), inv.end(), static_cast<int>(i + 1)) != inv.end();
      for (const LadderEntry& e : r.contacts) {
        if (std::abs(e.x0 - x0) > 1e-12) continue;
        c.expect((e.expected == Visibility::Invisible) == want_invisible, "invisible index set" + tag);
      }
    }
  }
}

// Criterion 5: local V2 at the invisible contacts tends to (2k+1)V2/3.
void v2_limit(Checks& c) {
  for (const UnfoldingParams& p :
       {UnfoldingParams{2, {-1.0, 1.0}, 0.1, 0.0}, UnfoldingParams{3, {-1.0, 1.0, 2.0, 3.0}, 0.1, 0.0}}) {
    for (double cc : {1.0, 0.5}) {
      const V2LimitReport r = local_V2_limit_check(sys_a(p.k, cc), p);
      const std::string tag = " (k=" + std::to_string(p.k) + ", c=" + fmt(cc) + ")";
      c.expect(r.pass, "V2 limit report" + tag);
      c.near(r.limit, (2 * p.k + 1) * (2.0 * cc / (2 * p.k + 1)) / 3.0, 1e-12, "limit value" + tag);
      for (const V2LimitIndex& ix : r.indices) {
        c.expect(ix.epsilons == std::vector<double>{0.1, 0.05, 0.025}, "ε grid" + tag);
        c.expect(ix.order >= kV2LimitMinOrder, "fitted order " + fmt(ix.order) + tag);
        for (std::size_t i = 1; i < ix.errors.size(); ++i) c.expect(ix.errors[i] < ix.errors[i - 1], "error decreases" + tag);
        if (p.k == 2) c.near(ix.values.back(), 2.0 * cc / 3.0, 0.05 * 2.0 * cc / 3.0, "V2,i at ε=0.025" + tag);
      }
    }
  }
}

// Criterion 6: coefficient identities over 50 seeded draws.
void lemma1(Checks& c) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const int k = 2 + draw % 2;
    std::vector<double> lam;
    while (lam.size() < static_cast<std::size_t>(2 * k - 2)) {
      const double a = u(rng);
      if (std::abs(a) < 0.2) continue;
      bool close = false;
      for (double b : lam) close = close || std::abs(a - b) < 0.2;
      if (!close) lam.push_back(a);
    }
    worst = std::max(worst, lemma1_check(sys_a(k, 1.0), k, lam).max_residual);
  }
  c.expect(worst < kLemma1ResidualTol, "max identity residual " + fmt(worst));
}

// Criterion 7: dichotomy, amplitude ratio and exponent on SYS-A(1,1).
void pseudo_hopf(Checks& c) {
  const std::vector<double> mags{1e-5, 1e-4, 1e-3};
  std::vector<double> bs;
  for (double m : mags) {
    bs.push_back(-m);
    bs.push_back(m);
  }
  const ScanTable t = pseudo_hopf_scan(sys_a(1, 1.0), bs, ShiftConvention::Minus, IntegratorConfig{}, 0.1);
  int neg = 0, pos = 0;
  std::vector<double> amp_neg, amp_pos;
  for (const ScanRow& r : t.rows) {
    (r.b < 0 ? neg : pos) += r.n_cycles > 0;
    if (r.n_cycles == 0) continue;
    c.expect(r.n_cycles == 1, "exactly one cycle at b=" + fmt(r.b));
    const LimitCycle& lc = r.cycles.front();
    c.expect(lc.stability == Stability::Unstable, "unstable at b=" + fmt(r.b));
    c.expect(std::abs(lc.derivative) > kHyperbolicityThreshold && lc.residual < kCycleResidualTol,
             "hyperbolic root at b=" + fmt(r.b));
    c.expect(lc.sliding_segments == 1 && is_sliding(lc.enclosed_segment.kind),
             "one enclosed sliding segment at b=" + fmt(r.b));
    if (std::abs(r.b) <= 1e-4) {
      const double ratio = r.amplitude / std::sqrt(3.0 * std::abs(r.b));
      c.expect(ratio >= 0.9 && ratio <= 1.1, "amplitude ratio " + fmt(ratio) + " at b=" + fmt(r.b));
    }
    (r.b < 0 ? amp_neg : amp_pos).push_back(r.amplitude);
  }
  c.expect((neg == 3 && pos == 0) || (neg == 0 && pos == 3), "one sign of b produces, the other does not");
  const std::vector<double>& amps = neg == 3 ? amp_neg : amp_pos;
  if (amps.size() == 3) c.near(loglog_slope(mags, amps), 0.5, 0.02, "amplitude exponent");
}

// Criterion 8: census on SYS-A(2,1) and SYS-A(3,1).
void census(Checks& c) {
  const IntegratorConfig cfg;
  for (const UnfoldingParams& p :
       {UnfoldingParams{2, {-1.0, 1.0}, 0.1, -1e-6}, UnfoldingParams{3, {-1.0, 1.0, 2.0, 3.0}, 0.05, -1e-8}}) {
    const std::string tag = " (k=" + std::to_string(p.k) + ")";
    const CensusReport r = cycle_census(sys_a(p.k, 1.0), p, cfg, 0.1);
    c.expect(r.pass, "census passes" + tag);
    c.expect(r.cycles.size() == static_cast<std::size_t>(p.k), std::to_string(r.cycles.size()) + " cycles" + tag);
    for (const LimitCycle& lc : r.cycles) {
      c.expect(lc.stability == Stability::Unstable, "unstable" + tag);
      c.expect(std::abs(lc.derivative) > kHyperbolicityThreshold, "hyperbolic" + tag);
      c.expect(lc.sliding_segments == 1, "single sliding segment" + tag);
    }
    UnfoldingParams q = p;
    q.b = -p.b;
    c.expect(cycle_census(sys_a(p.k, 1.0), q, cfg, 0.1).cycles.empty(), "no cycles for the opposite sign" + tag);
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string without_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\"") == std::string::npos) kept += line + "\n";
  }
  return kept;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(FOLDCYCLE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Criterion 9: involutions, centers, even orders, CLI contracts.
void structural(Checks& c) {
  const IntegratorConfig cfg;
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    for (double cc : {1.0, -1.0}) {
      for (Side side : {Side::Upper, Side::Lower}) {
        for (int i = 1; i <= 10; ++i) {
          const double x = 0.01 * i;
          const PiecewiseField z = sys_a(k, cc);
          worst = std::max(worst, std::abs(half_return(z, side, half_return(z, side, x, cfg), cfg) - x));
        }
      }
    }
  }
  c.expect(worst < 1e-7, "involution residual " + fmt(worst));

  for (int k = 1; k <= 3; ++k) {
    c.expect(estimate_lyapunov(sys_a(k, 0.0), 0.001, 0.02, cfg).center, "center on SYS-A(" + std::to_string(k) + ",0)");
  }

  std::vector<std::pair<std::string, PiecewiseField>> systems{{"SYS-G", sys_g()}};
  for (int k = 1; k <= 3; ++k) {
    for (double cc : {-1.0, 0.5, 1.0}) systems.emplace_back("SYS-A(" + std::to_string(k) + "," + fmt(cc) + ")", sys_a(k, cc));
  }
  for (const auto& [name, z] : systems) {
    const LyapunovEstimate e = estimate_lyapunov(z, 0.001, 0.02, cfg);
    c.expect(!e.center && e.order > 0 && e.order % 2 == 0, "even leading order on " + name);
  }

  const fs::path dir = fs::temp_directory_path() / ("foldcycle_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const std::string s = std::string(FOLDCYCLE_SCENARIO_DIR) + "/";
  for (const char* cmd : {"classify", "cycles", "scan"}) {
    const std::string scen = std::string(cmd) == "scan" ? "sys_a_1_1" : "sys_a_2_1";
    for (const char* run : {"a", "b"}) {
      c.expect(cli(std::string(cmd) + " --config " + s + scen + ".json --out " + (dir / run).string()) == 0,
               std::string("exit 0 for ") + cmd);
    }
    const std::string file = scen + "." + cmd + ".json";
    const std::string a = slurp(dir / "a" / file);
    c.expect(!a.empty() && without_timestamp(a) == without_timestamp(slurp(dir / "b" / file)),
             std::string("deterministic ") + cmd + " report");
  }
  const std::string out = " --out " + (dir / "c").string();
  c.expect(cli("classify --config " + s + "c3_violation.json" + out) == 1, "exit 1 on a monodromy violation");
  c.expect(cli("classify --config " + (dir / "missing.json").string() + out) == 1, "exit 1 on a missing config");
  c.expect(cli("cycles --config " + s + "sys_a_2_1.json --b 1e-6" + out) == 3, "exit 3 on a census mismatch");
  fs::remove_all(dir);
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<void(Checks&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "V2 closed form", 1.0, v2_closed_form},
      {2, "displacement consistency", 10.0, displacement_consistency},
      {3, "interpolation construction", 1.0, interpolation},
      {4, "contact ladder", 1.0, ladder},
      {5, "local V2 limit", 5.0, v2_limit},
      {6, "coefficient identities", 30.0, lemma1},
      {7, "pseudo-Hopf dichotomy and amplitude", 120.0, pseudo_hopf},
      {8, "k cycles end-to-end", 300.0, census},
      {9, "structural properties", 60.0, structural},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    Checks checks;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("unexpected error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    checks.expect(secs < cr.budget_s, "runtime " + fmt(secs) + " s over budget " + fmt(cr.budget_s) + " s");
    const bool ok = checks.failures().empty();
    failed += !ok;
    std::printf("%s %d %s (%.3f s)\n", ok ? "PASS" : "FAIL", cr.id, cr.title, secs);
    for (const auto& f : checks.failures()) std::printf("    %s\n", f.c_str());
  }
  return failed == 0 ? 0 : 1;
}
