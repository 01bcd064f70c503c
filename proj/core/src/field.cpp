#include "foldcycle/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace foldcycle {

std::string_view to_string(Side s) { return s == Side::Upper ? "upper" : "lower"; }

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::Visible: return "visible";
    case Visibility::Invisible: return "invisible";
    case Visibility::NotApplicable: return "not-applicable";
  }
  return "not-applicable";
}

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::Crossing: return "crossing";
    case SegmentKind::AttractingSliding: return "attracting-sliding";
    case SegmentKind::RepellingSliding: return "repelling-sliding";
  }
  return "crossing";
}

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void require_nonsingular_x(const SmoothField& f, double x0) {
  const double x_val = f.X.eval(x0, 0.0);
  if (std::abs(x_val) < 1e-12 * std::max(1.0, f.X.max_abs_coeff())) {
    throw Error(ErrorCode::SingularX, "X vanishes at (" + std::to_string(x0) + ", 0)");
  }
}

// Taylor coefficients of Y(x, 0) about x0 and the scale used by the zero test.
struct LocalSigma {
  Poly1 coeffs;
  double zero_tol;

  double derivative(int n) const { return factorial(n) * coeffs[n]; }
  bool vanishes(int n) const { return std::abs(derivative(n)) < zero_tol; }
};

LocalSigma local_sigma(const SmoothField& f, double x0) {
  Poly1 r = f.Y.restrict_sigma().shifted(x0);
  const double tol = kDerivativeZeroTol * std::max(1.0, r.max_abs_coeff());
  return {std::move(r), tol};
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

[[noreturn]] void not_monodromic(const std::string& condition, const std::string& detail) {
  throw Error(ErrorCode::NotMonodromic, condition + " violated: " + detail);
}

// ±δ·Y(x,0) − a·x^{2k−1}·X(x,0), sign + for the upper side.
Poly1 aux_f_numerator(const SmoothField& f, Side side, int k, int delta, double a) {
  const double s = side == Side::Upper ? 1.0 : -1.0;
  return f.Y.restrict_sigma() * (s * delta) - Poly1::monomial(2 * k - 1, a) * f.X.restrict_sigma();
}

Poly1 divide_exact_by_x_power(const Poly1& num, int n, const char* what) {
  std::vector<double> rem;
  Poly1 q = num.divide_by_x_power(n, &rem);
  const double tol = kDivisionTol * std::max(1.0, num.max_abs_coeff());
  for (std::size_t i = 0; i < rem.size(); ++i) {
    if (std::abs(rem[i]) >= tol) {
      throw Error(ErrorCode::DivisionResidual, std::string(what) + ": coefficient of x^" + std::to_string(i) +
                                                   " is " + std::to_string(rem[i]) + ", expected 0");
    }
  }
  return q;
}

struct SideData {
  int k = 0;
  double x0 = 0.0;  // X(0,0)
  double a = 0.0;
};

SideData classify_side(const SmoothField& f, Side side) {
  const std::string label = side == Side::Upper ? "upper" : "lower";
  const double x0 = f.X.eval(0.0, 0.0);
  if (std::abs(x0) < 1e-12 * std::max(1.0, f.X.max_abs_coeff())) {
    not_monodromic("C1", label + " X(0,0) = 0");
  }
  int m = 0;
  try {
    m = contact_multiplicity(f, 0.0);
  } catch (const Error& e) {
    not_monodromic("C1", label + " field: " + e.what());
  }
  if (m < 2 || m % 2 != 0) {
    not_monodromic("C1", label + " contact multiplicity " + std::to_string(m) + " is not even");
  }
  const int k = m / 2;
  const double d = sigma_derivative(f, 0.0, 2 * k - 1);
  const double product = x0 * d;
  if (side == Side::Upper ? !(product < 0.0) : !(product > 0.0)) {
    not_monodromic("C2", label + " X·d^{2k-1}Y/dx^{2k-1} has the wrong sign");
  }
  return {k, x0, d / (factorial(2 * k - 1) * std::abs(x0))};
}

}  // namespace

double sigma_derivative(const SmoothField& f, double x0, int n) {
  return local_sigma(f, x0).derivative(n);
}

int contact_multiplicity(const SmoothField& f, double x0) {
  require_nonsingular_x(f, x0);
  const LocalSigma loc = local_sigma(f, x0);
  if (!loc.vanishes(0)) return 1;
  for (int n = 1; n <= loc.coeffs.degree(); ++n) {
    if (!loc.vanishes(n)) return n + 1;
  }
  throw Error(ErrorCode::DegenerateContact,
              "all derivatives of Y(x,0) vanish at x = " + std::to_string(x0));
}

Visibility visibility(const SmoothField& f, Side side, double x0, int n) {
  if (n < 2 || n % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "visibility needs an even multiplicity, got " + std::to_string(n));
  }
  const int m = contact_multiplicity(f, x0);
  if (m != n) {
    throw Error(ErrorCode::InvalidArgument, "contact multiplicity at " + std::to_string(x0) + " is " +
                                                std::to_string(m) + ", not " + std::to_string(n));
  }
  const double product = f.X.eval(x0, 0.0) * sigma_derivative(f, x0, n - 1);
  const bool invisible = side == Side::Upper ? product < 0.0 : product > 0.0;
  return invisible ? Visibility::Invisible : Visibility::Visible;
}

ContactInfo contact_info(const SmoothField& f, Side side, double x0) {
  ContactInfo info;
  info.x0 = x0;
  info.side = side;
  info.multiplicity = contact_multiplicity(f, x0);
  if (info.multiplicity >= 2 && info.multiplicity % 2 == 0) {
    info.visibility = visibility(f, side, x0, info.multiplicity);
  }
  return info;
}

MonodromyData classify_mts(const PiecewiseField& z) {
  const SideData up = classify_side(z.upper, Side::Upper);
  const SideData lo = classify_side(z.lower, Side::Lower);
  if (!(up.x0 * lo.x0 < 0.0)) not_monodromic("C3", "X+(0,0)·X-(0,0) >= 0");

  MonodromyData d;
  d.k_plus = up.k;
  d.k_minus = lo.k;
  d.delta = sign_of(up.x0);
  d.a_plus = up.a;
  d.a_minus = lo.a;

  const auto f0_of = [&](const SmoothField& f, Side side, const SideData& sd) {
    const Poly1 num = aux_f_numerator(f, side, sd.k, d.delta, sd.a);
    const Poly1 q = divide_exact_by_x_power(num, 2 * sd.k, "f numerator");
    return q[0] / sd.x0;
  };
  const auto g00_of = [&](const SmoothField& f, Side side, const SideData& sd) {
    const double s = side == Side::Upper ? 1.0 : -1.0;
    const Poly2 g = (Poly2::from_x(f.X.restrict_sigma()) * f.Y - f.X * Poly2::from_x(f.Y.restrict_sigma())) * s;
    const double tol = kDivisionTol * std::max(1.0, g.max_abs_coeff());
    for (const auto& [key, c] : g.terms()) {
      if (key.second == 0 && std::abs(c) >= tol) {
        throw Error(ErrorCode::DivisionResidual, "g numerator is not divisible by y");
      }
    }
    return g.taylor_coeff(0, 1) / (d.delta * sd.x0 * sd.x0);
  };

  d.f0_plus = f0_of(z.upper, Side::Upper, up);
  d.f0_minus = f0_of(z.lower, Side::Lower, lo);
  d.g00_plus = g00_of(z.upper, Side::Upper, up);
  d.g00_minus = g00_of(z.lower, Side::Lower, lo);
  d.alpha2_plus = (-2.0 * d.f0_plus + 2.0 * d.delta * d.a_plus * d.g00_plus) / (d.a_plus * (2 * d.k_plus + 1));
  d.alpha2_minus =
      (-2.0 * d.f0_minus - 2.0 * d.delta * d.a_minus * d.g00_minus) / (d.a_minus * (2 * d.k_minus + 1));
  d.V2 = lyapunov_V2(d);
  return d;
}

double lyapunov_V2(const MonodromyData& d) { return d.delta * (d.alpha2_plus - d.alpha2_minus); }

double local_V2(const PiecewiseField& z, double x0) {
  const MonodromyData d = classify_mts(z.shift_x(x0));
  if (d.k_plus != 1 || d.k_minus != 1) {
    throw Error(ErrorCode::NotMonodromic, "point " + std::to_string(x0) + " is a (" +
                                              std::to_string(2 * d.k_plus) + "," + std::to_string(2 * d.k_minus) +
                                              ") singularity, expected (2,2)");
  }
  return d.V2;
}

AuxF aux_f(const PiecewiseField& z, const MonodromyData& d, Side side) {
  const SmoothField& f = z.side(side);
  const int k = d.k(side);
  const Poly1 num = aux_f_numerator(f, side, k, d.delta, d.a(side));
  return {divide_exact_by_x_power(num, 2 * k, "f numerator"), f.X.restrict_sigma()};
}

SegmentKind sigma_kind_at(const PiecewiseField& z, double x) {
  const double yp = z.upper.Y.eval(x, 0.0);
  const double ym = z.lower.Y.eval(x, 0.0);
  if (yp < 0.0 && ym > 0.0) return SegmentKind::AttractingSliding;
  if (ym < 0.0 && yp > 0.0) return SegmentKind::RepellingSliding;
  return SegmentKind::Crossing;
}

std::vector<SigmaSegment> sigma_regions(const PiecewiseField& z, double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "empty interval");
  const Poly1 yp = z.upper.Y.restrict_sigma();
  const Poly1 ym = z.lower.Y.restrict_sigma();
  if (yp.is_zero() || ym.is_zero()) {
    throw Error(ErrorCode::InvalidArgument, "Y vanishes identically on the switching line");
  }
  std::vector<double> cuts;
  for (const Poly1* p : {&yp, &ym}) {
    for (double r : real_roots(*p, lo, hi)) {
      if (r > lo && r < hi) cuts.push_back(r);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> knots{lo};
  for (double c : cuts) {
    if (c - knots.back() > 1e-12 * std::max(1.0, std::abs(c))) knots.push_back(c);
  }
  knots.push_back(hi);

  std::vector<SigmaSegment> out;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    SigmaSegment s;
    s.x_lo = knots[i];
    s.x_hi = knots[i + 1];
    s.lo_is_contact = i > 0;
    s.hi_is_contact = i + 2 < knots.size();
    s.kind = sigma_kind_at(z, 0.5 * (s.x_lo + s.x_hi));
    out.push_back(s);
  }
  return out;
}

}  // namespace foldcycle
