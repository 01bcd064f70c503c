#include "foldcycle/unfold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace foldcycle {

std::string_view to_string(ShiftConvention c) { return c == ShiftConvention::Minus ? "minus" : "plus"; }

ShiftConvention parse_shift_convention(std::string_view s) {
  if (s == "minus") return ShiftConvention::Minus;
  if (s == "plus") return ShiftConvention::Plus;
  throw Error(ErrorCode::InvalidArgument, "shift convention must be 'minus' or 'plus', got '" + std::string(s) + "'");
}

void validate_lambda(int k, const std::vector<double>& lambda) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");
  if (static_cast<int>(lambda.size()) != 2 * k - 2) {
    throw Error(ErrorCode::InvalidLambda, "lambda needs 2k-2 = " + std::to_string(2 * k - 2) + " entries, got " +
                                              std::to_string(lambda.size()));
  }
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!std::isfinite(lambda[i]) || std::abs(lambda[i]) < kLambdaMinGap) {
      throw Error(ErrorCode::InvalidLambda, "a_" + std::to_string(i + 1) + " is zero or not finite");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(lambda[i] - lambda[j]) < kLambdaMinGap) {
        throw Error(ErrorCode::InvalidLambda,
                    "a_" + std::to_string(j + 1) + " and a_" + std::to_string(i + 1) + " coincide");
      }
    }
  }
}

bool lambda_is_ordered(const std::vector<double>& lambda) {
  if (lambda.empty()) return true;
  if (!(lambda[0] < 0.0)) return false;
  double prev = 0.0;
  for (std::size_t i = 1; i < lambda.size(); ++i) {
    if (!(lambda[i] > prev)) return false;
    prev = lambda[i];
  }
  return true;
}

std::vector<int> invisible_indices(int k) {
  std::vector<int> out;
  if (k < 2) return out;
  out.push_back(1);
  for (int i = 2; i <= 2 * k - 2; i += 2) out.push_back(i);
  return out;
}

namespace {

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

// Gaussian elimination with partial pivoting; also used with exact rationals.
template <class T>
std::vector<T> solve_linear(std::vector<std::vector<T>> A, std::vector<T> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (abs_value(A[r][col]) > abs_value(A[piv][col])) piv = r;
    }
    if (A[piv][col] == T(0)) throw Error(ErrorCode::IllConditioned, "singular interpolation matrix");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const T m = A[r][col] / A[col][col];
      if (m == T(0)) continue;
      for (std::size_t c = col; c < n; ++c) A[r][c] -= m * A[col][c];
      b[r] -= m * b[col];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= A[i][c] * x[c];
    x[i] = acc / A[i][i];
  }
  return x;
}

// Monomial coefficients of the Newton interpolant through (nodes, values).
std::vector<double> newton_interpolate(const std::vector<double>& nodes, const std::vector<double>& values) {
  const std::size_t n = nodes.size();
  std::vector<double> dd = values;
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]);
    }
  }
  std::vector<double> poly{dd[n - 1]};
  for (std::size_t m = n - 1; m-- > 0;) {
    std::vector<double> next(poly.size() + 1, 0.0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 1] += poly[j];
      next[j] -= nodes[m] * poly[j];
    }
    next[0] += dd[m];
    poly = std::move(next);
  }
  return poly;
}

double vec_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Scaled targets v_i = ξ_i / ε^{2k−1}.
struct ScaledXi {
  std::vector<double> plus;
  std::vector<double> minus;
};

ScaledXi scaled_xi(const PiecewiseField& z, const MonodromyData& d, const std::vector<double>& lambda,
                   double epsilon) {
  if (d.k_plus != d.k_minus) {
    throw Error(ErrorCode::InvalidArgument, "unfolding needs k+ = k-, got " + std::to_string(d.k_plus) + " and " +
                                                std::to_string(d.k_minus));
  }
  const int k = d.k_plus;
  const AuxF fp = aux_f(z, d, Side::Upper);
  const AuxF fm = aux_f(z, d, Side::Lower);
  ScaledXi v;
  for (double ai : lambda) {
    const double p1 = std::pow(ai, 2 * k - 1);
    const double p2 = std::pow(ai, 2 * k);
    v.plus.push_back(-d.delta * (d.a_plus * p1 + epsilon * p2 * fp(epsilon * ai)));
    v.minus.push_back(d.delta * (d.a_minus * p1 + epsilon * p2 * fm(epsilon * ai)));
  }
  return v;
}

struct SideSolution {
  std::vector<double> scaled;  // C_j, j = 1..n
  std::vector<double> coeffs;  // c_j, j = 1..n
  double disagreement = 0.0;
};

SideSolution solve_side(const std::vector<double>& lambda, const std::vector<double>& v, int k, double epsilon) {
  const std::size_t n = lambda.size();
  SideSolution s;

  std::vector<double> nodes{0.0};
  std::vector<double> values{0.0};
  nodes.insert(nodes.end(), lambda.begin(), lambda.end());
  values.insert(values.end(), v.begin(), v.end());
  const std::vector<double> q = newton_interpolate(nodes, values);
  for (std::size_t j = 1; j <= n; ++j) {
    s.scaled.push_back(q[j]);
    s.coeffs.push_back(q[j] * std::pow(epsilon, 2 * k - 1 - static_cast<int>(j)));
  }

  // Direct solve of H c = ξ with H_ij = (ε a_i)^j.
  std::vector<std::vector<double>> H(n, std::vector<double>(n));
  std::vector<double> xi(n);
  const double e_pow = std::pow(epsilon, 2 * k - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) H[i][j] = std::pow(epsilon * lambda[i], static_cast<int>(j) + 1);
    xi[i] = e_pow * v[i];
  }
  const std::vector<double> direct = solve_linear(H, xi);
  std::vector<double> diff(n);
  for (std::size_t j = 0; j < n; ++j) diff[j] = direct[j] - s.coeffs[j];
  const double ref = vec_norm(s.coeffs);
  s.disagreement = ref > 0.0 ? vec_norm(diff) / ref : vec_norm(diff);
  return s;
}

Poly1 from_tail(const std::vector<double>& c) {
  std::vector<double> v{0.0};
  v.insert(v.end(), c.begin(), c.end());
  return Poly1(std::move(v));
}

}  // namespace

XiValues xi_values(const PiecewiseField& z, const MonodromyData& d, const std::vector<double>& lambda,
                   double epsilon) {
  const ScaledXi v = scaled_xi(z, d, lambda, epsilon);
  const double e_pow = std::pow(epsilon, 2 * d.k_plus - 1);
  XiValues out;
  for (double x : v.plus) out.plus.push_back(e_pow * x);
  for (double x : v.minus) out.minus.push_back(e_pow * x);
  return out;
}

PerturbationPolys build_perturbation(const PiecewiseField& z, const UnfoldingParams& params) {
  if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  }
  validate_lambda(params.k, params.lambda);
  const MonodromyData d = classify_mts(z);
  if (d.k_plus != params.k || d.k_minus != params.k) {
    throw Error(ErrorCode::InvalidArgument, "field has a (" + std::to_string(2 * d.k_plus) + "," +
                                                std::to_string(2 * d.k_minus) + ") singularity but k = " +
                                                std::to_string(params.k));
  }
  PerturbationPolys out;
  if (params.k == 1) return out;

  const ScaledXi v = scaled_xi(z, d, params.lambda, params.epsilon);
  const SideSolution up = solve_side(params.lambda, v.plus, params.k, params.epsilon);
  const SideSolution lo = solve_side(params.lambda, v.minus, params.k, params.epsilon);
  out.method_disagreement = std::max(up.disagreement, lo.disagreement);
  if (out.method_disagreement > kMethodAgreementTol) {
    throw Error(ErrorCode::IllConditioned, "direct solve and divided differences differ by " +
                                               std::to_string(out.method_disagreement) + " (relative)");
  }
  out.p_plus = from_tail(up.coeffs);
  out.p_minus = from_tail(lo.coeffs);
  out.scaled_plus = up.scaled;
  out.scaled_minus = lo.scaled;
  out.norm_plus = out.p_plus.norm();
  out.norm_minus = out.p_minus.norm();
  return out;
}

PiecewiseField build_unfolded(const PiecewiseField& z, const PerturbationPolys& polys) {
  PiecewiseField r = z;
  r.upper.Y = z.upper.Y + z.upper.X * Poly2::from_x(polys.p_plus);
  r.lower.Y = z.lower.Y + z.lower.X * Poly2::from_x(polys.p_minus);
  return r;
}

PiecewiseField apply_shift(const PiecewiseField& z, double b, ShiftConvention convention) {
  if (b == 0.0) return z;
  PiecewiseField r = z;
  r.upper = z.upper.shift_x(convention == ShiftConvention::Minus ? -b : b);
  return r;
}

PiecewiseField unfolded_field(const PiecewiseField& z, const UnfoldingParams& params) {
  return apply_shift(build_unfolded(z, build_perturbation(z, params)), params.b, params.shift);
}

std::vector<double> contact_abscissas(const UnfoldingParams& params) {
  std::vector<double> xs{0.0};
  for (double a : params.lambda) xs.push_back(params.epsilon * a);
  std::sort(xs.begin(), xs.end());
  return xs;
}

LadderReport verify_contact_ladder(const PiecewiseField& unfolded, const UnfoldingParams& params) {
  validate_lambda(params.k, params.lambda);
  const std::vector<double> xs = contact_abscissas(params);
  // The shift moves every upper contact by +b (minus) or −b (plus).
  const double upper_offset = params.shift == ShiftConvention::Minus ? params.b : -params.b;

  LadderReport rep;
  const Poly1 yp = unfolded.upper.Y.restrict_sigma();
  const Poly1 ym = unfolded.lower.Y.restrict_sigma();
  const double scale_p = std::max(1.0, yp.max_abs_coeff());
  const double scale_m = std::max(1.0, ym.max_abs_coeff());

  for (std::size_t pos = 0; pos < xs.size(); ++pos) {
    LadderEntry e;
    e.x0 = xs[pos];
    e.expected = pos % 2 == 0 ? Visibility::Invisible : Visibility::Visible;
    const double xp = e.x0 + upper_offset;
    e.residual_plus = std::abs(yp.eval(xp));
    e.residual_minus = std::abs(ym.eval(e.x0));
    std::string why;
    try {
      const ContactInfo cp = contact_info(unfolded.upper, Side::Upper, xp);
      const ContactInfo cm = contact_info(unfolded.lower, Side::Lower, e.x0);
      e.multiplicity_plus = cp.multiplicity;
      e.multiplicity_minus = cm.multiplicity;
      e.visibility_plus = cp.visibility;
      e.visibility_minus = cm.visibility;
    } catch (const Error& err) {
      why = err.what();
    }
    if (e.residual_plus >= kLadderResidualTol * scale_p) why += " |Y+| residual too large;";
    if (e.residual_minus >= kLadderResidualTol * scale_m) why += " |Y-| residual too large;";
    if (e.multiplicity_plus != 2 || e.multiplicity_minus != 2) why += " multiplicity is not 2;";
    if (e.visibility_plus != e.expected || e.visibility_minus != e.expected) {
      why += " expected " + std::string(to_string(e.expected)) + ";";
    }
    e.ok = why.empty();
    if (!e.ok) rep.failures.push_back("x0 = " + std::to_string(e.x0) + ":" + why);
    rep.contacts.push_back(e);
  }

  // Any other root of Y±(x,0) near the ladder would break the predicted pattern.
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < xs.size(); ++i) gap = std::min(gap, xs[i] - xs[i - 1]);
  const double margin = std::isfinite(gap) ? gap / 2.0 : params.epsilon / 2.0;
  const auto count_extra = [&](const Poly1& p, double offset) {
    if (p.is_zero()) return 0;
    int extra = 0;
    for (double r : real_roots(p, xs.front() + offset - margin, xs.back() + offset + margin)) {
      const bool predicted = std::any_of(xs.begin(), xs.end(), [&](double x) {
        return std::abs(x + offset - r) < 1e-6 * margin;
      });
      if (!predicted) ++extra;
    }
    return extra;
  };
  rep.extra_roots_plus = count_extra(yp, upper_offset);
  rep.extra_roots_minus = count_extra(ym, 0.0);
  if (rep.extra_roots_plus > 0 || rep.extra_roots_minus > 0) {
    rep.failures.push_back("unpredicted contacts: " + std::to_string(rep.extra_roots_plus) + " upper, " +
                           std::to_string(rep.extra_roots_minus) + " lower");
  }
  rep.pass = rep.failures.empty();
  return rep;
}

namespace {

template <class T>
double to_double(const T& v) {
  return static_cast<double>(v);
}

template <class T>
T tpow(const T& b, int e) {
  return detail::ipow(b, e);
}

// s-sums, interpolation-identity right-hand sides and T/U factorizations for one side;
// sd is the side sign ±δ.
template <class T>
Lemma1Side side_identities(const std::vector<T>& C, const std::vector<T>& dC, const T& a, const T& f0, int sd,
                           const std::vector<T>& lam, const T& alpha, int k) {
  const int n = static_cast<int>(lam.size());
  const T s(sd);
  Lemma1Side out;
  for (const auto& c : C) out.C.push_back(to_double(c));
  for (const auto& c : dC) out.dC.push_back(to_double(c));

  for (int i = 0; i < n; ++i) {
    const T& ai = lam[static_cast<std::size_t>(i)];
    T s1(0), s2(0), s3(0), s4(0);
    for (int j = 1; j <= n; ++j) {
      const auto idx = static_cast<std::size_t>(j - 1);
      s1 += T(j) * tpow(ai, j - 1) * C[idx];
      s2 += T(j) * tpow(ai, j - 1) * dC[idx];
      if (j >= 2) {
        s3 += T(j * (j - 1)) * tpow(ai, j - 2) * C[idx];
        s4 += T(j * (j - 1)) * tpow(ai, j - 2) * dC[idx];
      }
    }
    const T ratio = f0 / a;
    const T rhs2 = ratio * ((ai - alpha) * s1 - s * a * tpow(ai, 2 * k - 1) -
                            s * T(2 * k - 1) * a * alpha * tpow(ai, 2 * k - 2));
    const T rhs4 = ratio * ((ai - alpha) * s3 + T(2) * s1 - s * T((2 * k - 2) * (2 * k - 1)) * a * alpha *
                                                                tpow(ai, 2 * k - 3));
    out.s1.push_back(to_double(s1));
    out.s2.push_back(to_double(s2));
    out.s3.push_back(to_double(s3));
    out.s4.push_back(to_double(s4));
    out.s2_residual.push_back(to_double(abs_value(T(s2 - rhs2))));
    out.s4_residual.push_back(to_double(abs_value(T(s4 - rhs4))));
  }

  // x·Π(x − a_j)
  BasicPoly1<T> roots_poly(std::vector<T>{T(0), T(1)});
  for (const auto& aj : lam) roots_poly = roots_poly * BasicPoly1<T>(std::vector<T>{T(-aj), T(1)});

  std::vector<T> tc(static_cast<std::size_t>(2 * k), T(0));
  std::vector<T> uc(static_cast<std::size_t>(2 * k + 1), T(0));
  for (int j = 1; j <= n; ++j) {
    tc[static_cast<std::size_t>(j)] = C[static_cast<std::size_t>(j - 1)];
    uc[static_cast<std::size_t>(j)] = dC[static_cast<std::size_t>(j - 1)];
  }
  tc[static_cast<std::size_t>(2 * k - 1)] += s * a;
  uc[static_cast<std::size_t>(2 * k)] += s * f0;
  const BasicPoly1<T> t_expected = roots_poly * (s * a);
  const BasicPoly1<T> u_expected = roots_poly * BasicPoly1<T>(std::vector<T>{T(-alpha), T(1)}) * (s * f0);
  for (int j = 0; j <= 2 * k; ++j) {
    if (j < 2 * k) {
      out.T_residual = std::max(out.T_residual, to_double(abs_value(T(tc[static_cast<std::size_t>(j)] - t_expected[j]))));
    }
    out.U_residual = std::max(out.U_residual, to_double(abs_value(T(uc[static_cast<std::size_t>(j)] - u_expected[j]))));
  }
  return out;
}

// Value and derivative at 0 of the quadratic through (e_m, g_m).
std::pair<double, double> extrapolate_quadratic(const std::array<double, 3>& e, const std::array<double, 3>& g) {
  double value = 0.0;
  double slope = 0.0;
  for (int m = 0; m < 3; ++m) {
    double denom = 1.0;
    for (int p = 0; p < 3; ++p) {
      if (p != m) denom *= e[m] - e[p];
    }
    double l0 = 1.0;
    for (int p = 0; p < 3; ++p) {
      if (p != m) l0 *= -e[p];
    }
    double dl0 = 0.0;
    for (int p = 0; p < 3; ++p) {
      if (p == m) continue;
      double prod = 1.0;
      for (int q = 0; q < 3; ++q) {
        if (q != m && q != p) prod *= -e[q];
      }
      dl0 += prod;
    }
    value += g[m] * l0 / denom;
    slope += g[m] * dl0 / denom;
  }
  return {value, slope};
}

template <class T>
void solve_exact_side(const std::vector<T>& lam, const T& a, const T& f0, int sd, int k, std::vector<T>& C,
                      std::vector<T>& dC) {
  const std::size_t n = lam.size();
  std::vector<std::vector<T>> V(n, std::vector<T>(n));
  std::vector<T> r0(n);
  std::vector<T> r1(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) V[i][j] = tpow(lam[i], static_cast<int>(j) + 1);
    r0[i] = -T(sd) * a * tpow(lam[i], 2 * k - 1);
    r1[i] = -T(sd) * f0 * tpow(lam[i], 2 * k);
  }
  C = solve_linear(V, r0);
  dC = solve_linear(V, r1);
}

}  // namespace

Lemma1Report lemma1_check(const PiecewiseField& z, int k, const std::vector<double>& lambda, bool exact) {
  validate_lambda(k, lambda);
  const MonodromyData d = classify_mts(z);
  if (d.k_plus != k || d.k_minus != k) {
    throw Error(ErrorCode::InvalidArgument, "field singularity order does not match k = " + std::to_string(k));
  }
  Lemma1Report rep;
  rep.k = k;
  rep.lambda = lambda;
  rep.exact = exact;
  double alpha = 0.0;
  for (double a : lambda) alpha -= a;
  rep.alpha = alpha;
  if (k == 1) return rep;

  const int sd_plus = d.delta;
  const int sd_minus = -d.delta;
  if (exact) {
    std::vector<Rational> lam;
    Rational alpha_q(0);
    for (double a : lambda) {
      lam.emplace_back(a);
      alpha_q -= Rational(a);
    }
    const Rational ap(d.a_plus), am(d.a_minus), fp(d.f0_plus), fm(d.f0_minus);
    std::vector<Rational> Cp, dCp, Cm, dCm;
    solve_exact_side(lam, ap, fp, sd_plus, k, Cp, dCp);
    solve_exact_side(lam, am, fm, sd_minus, k, Cm, dCm);
    rep.plus = side_identities(Cp, dCp, ap, fp, sd_plus, lam, alpha_q, k);
    rep.minus = side_identities(Cm, dCm, am, fm, sd_minus, lam, alpha_q, k);
  } else {
    const std::array<double, 3> eps{kLemma1Step, kLemma1Step / 2.0, kLemma1Step / 4.0};
    std::array<PerturbationPolys, 3> polys;
    for (int m = 0; m < 3; ++m) polys[m] = build_perturbation(z, {k, lambda, eps[m], 0.0, ShiftConvention::Minus});
    const std::size_t n = lambda.size();
    std::vector<double> Cp(n), dCp(n), Cm(n), dCm(n);
    for (std::size_t j = 0; j < n; ++j) {
      std::tie(Cp[j], dCp[j]) = extrapolate_quadratic(
          eps, {polys[0].scaled_plus[j], polys[1].scaled_plus[j], polys[2].scaled_plus[j]});
      std::tie(Cm[j], dCm[j]) = extrapolate_quadratic(
          eps, {polys[0].scaled_minus[j], polys[1].scaled_minus[j], polys[2].scaled_minus[j]});
    }
    rep.plus = side_identities(Cp, dCp, d.a_plus, d.f0_plus, sd_plus, lambda, alpha, k);
    rep.minus = side_identities(Cm, dCm, d.a_minus, d.f0_minus, sd_minus, lambda, alpha, k);
  }

  rep.f0_ratio_checks_skipped = d.f0_plus == 0.0;
  const double ra = d.a_minus / d.a_plus;
  const double rf = rep.f0_ratio_checks_skipped ? 0.0 : d.f0_minus / d.f0_plus;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    std::array<double, 4> c{};
    c[0] = std::abs(rep.minus.s1[i] + ra * rep.plus.s1[i]);
    c[2] = std::abs(rep.minus.s3[i] + ra * rep.plus.s3[i]);
    if (!rep.f0_ratio_checks_skipped) {
      c[1] = std::abs(rep.minus.s2[i] + rf * rep.plus.s2[i]);
      c[3] = std::abs(rep.minus.s4[i] + rf * rep.plus.s4[i]);
    }
    rep.cross_side_residuals.push_back(c);
  }

  double m = 0.0;
  for (const Lemma1Side* s : {&rep.plus, &rep.minus}) {
    for (double r : s->s2_residual) m = std::max(m, r);
    for (double r : s->s4_residual) m = std::max(m, r);
    m = std::max({m, s->T_residual, s->U_residual});
  }
  for (const auto& c : rep.cross_side_residuals) {
    for (double r : c) m = std::max(m, r);
  }
  rep.max_residual = m;
  return rep;
}

V2LimitReport local_V2_limit_check(const PiecewiseField& z, const UnfoldingParams& params) {
  validate_lambda(params.k, params.lambda);
  if (!lambda_is_ordered(params.lambda)) {
    throw Error(ErrorCode::InvalidLambda, "lambda must satisfy a_1 < 0 < a_2 < ... < a_{2k-2}");
  }
  const MonodromyData d = classify_mts(z);
  V2LimitReport rep;
  rep.V2 = d.V2;
  if (std::abs(d.V2) < 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "V2 vanishes; the local limit needs V2 != 0");
  }
  rep.limit = (2 * params.k + 1) * d.V2 / 3.0;

  for (int idx : invisible_indices(params.k)) {
    V2LimitIndex e;
    e.index = idx;
    e.a = params.lambda[static_cast<std::size_t>(idx - 1)];
    for (int m = 0; m < 3; ++m) {
      const double eps = params.epsilon / std::pow(2.0, m);
      UnfoldingParams p = params;
      p.epsilon = eps;
      p.b = 0.0;
      const PiecewiseField zu = unfolded_field(z, p);
      const double v = local_V2(zu, eps * e.a);
      e.epsilons.push_back(eps);
      e.values.push_back(v);
      e.errors.push_back(std::abs(v - rep.limit));
      e.K = std::max(e.K, e.errors.back() / eps);
    }
    const bool any_zero = std::any_of(e.errors.begin(), e.errors.end(), [](double r) { return r == 0.0; });
    if (any_zero) {
      e.order = std::numeric_limits<double>::infinity();
    } else {
      double mx = 0.0, my = 0.0;
      for (int m = 0; m < 3; ++m) {
        mx += std::log(e.epsilons[m]) / 3.0;
        my += std::log(e.errors[m]) / 3.0;
      }
      double sxx = 0.0, sxy = 0.0;
      for (int m = 0; m < 3; ++m) {
        sxx += (std::log(e.epsilons[m]) - mx) * (std::log(e.epsilons[m]) - mx);
        sxy += (std::log(e.epsilons[m]) - mx) * (std::log(e.errors[m]) - my);
      }
      e.order = sxy / sxx;
    }
    const bool decreasing = e.errors[1] <= e.errors[0] && e.errors[2] <= e.errors[1];
    e.ok = e.order >= kV2LimitMinOrder && decreasing;
    if (!e.ok) {
      rep.failures.push_back("index " + std::to_string(idx) + ": fitted order " + std::to_string(e.order));
    }
    rep.indices.push_back(e);
  }
  rep.pass = rep.failures.empty();
  return rep;
}

}  // namespace foldcycle
