#pragma once

#include <string_view>
#include <vector>

#include "foldcycle/poly.hpp"

namespace foldcycle {

enum class Side { Upper, Lower };
enum class Visibility { Visible, Invisible, NotApplicable };
enum class SegmentKind { Crossing, AttractingSliding, RepellingSliding };

std::string_view to_string(Side s);
std::string_view to_string(Visibility v);
std::string_view to_string(SegmentKind k);

inline bool is_sliding(SegmentKind k) { return k != SegmentKind::Crossing; }

struct SmoothField {
  Poly2 X;
  Poly2 Y;

  SmoothField shift_x(double h) const { return {X.shift_x(h), Y.shift_x(h)}; }
  friend bool operator==(const SmoothField&, const SmoothField&) = default;
};

/// Upper field lives on y > 0, lower on y < 0; the switching line is y = 0.
struct PiecewiseField {
  SmoothField upper;
  SmoothField lower;

  const SmoothField& side(Side s) const { return s == Side::Upper ? upper : lower; }

  /// Both sides composed with x -> x + h.
  PiecewiseField shift_x(double h) const { return {upper.shift_x(h), lower.shift_x(h)}; }
  friend bool operator==(const PiecewiseField&, const PiecewiseField&) = default;
};

struct ContactInfo {
  double x0 = 0.0;
  Side side = Side::Upper;
  int multiplicity = 1;  // 1 means a regular point of the switching line
  Visibility visibility = Visibility::NotApplicable;
};

/// Classification record of a (2k+, 2k-)-monodromic tangential singularity
/// at the origin.
struct MonodromyData {
  int k_plus = 0;
  int k_minus = 0;
  int delta = 0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  double f0_plus = 0.0;
  double f0_minus = 0.0;
  double g00_plus = 0.0;
  double g00_minus = 0.0;
  double alpha2_plus = 0.0;
  double alpha2_minus = 0.0;
  double V2 = 0.0;

  double a(Side s) const { return s == Side::Upper ? a_plus : a_minus; }
  double f0(Side s) const { return s == Side::Upper ? f0_plus : f0_minus; }
  int k(Side s) const { return s == Side::Upper ? k_plus : k_minus; }
};

struct SigmaSegment {
  double x_lo = 0.0;
  double x_hi = 0.0;
  SegmentKind kind = SegmentKind::Crossing;
  bool lo_is_contact = false;  // endpoint is a root of Y+(x,0)·Y-(x,0)
  bool hi_is_contact = false;
};

/// Zero test used for every derivative of Y(x, 0):
/// |value| < 1e-11 · max(1, largest coefficient of the restricted polynomial).
inline constexpr double kDerivativeZeroTol = 1e-11;
/// Remainder tolerance when dividing out x^{2k} or y in the auxiliary functions.
inline constexpr double kDivisionTol = 1e-10;

/// n-th x-derivative of Y(x, 0) at x0.
double sigma_derivative(const SmoothField& f, double x0, int n);

int contact_multiplicity(const SmoothField& f, double x0);

/// Geometric criterion: the tangent orbit leaves its own half-plane.
/// Upper invisible iff X·Y^(n-1) < 0, lower invisible iff X·Y^(n-1) > 0.
Visibility visibility(const SmoothField& f, Side side, double x0, int n);

ContactInfo contact_info(const SmoothField& f, Side side, double x0);

MonodromyData classify_mts(const PiecewiseField& z);

double lyapunov_V2(const MonodromyData& d);

/// V2 of the (2,2)-monodromic singularity at (x0, 0), computed after
/// translating it to the origin.
double local_V2(const PiecewiseField& z, double x0);

/// f(x) = (±δ·Y(x,0) − a·x^{2k−1}·X(x,0)) / (x^{2k}·X(x,0)), with the
/// division by x^{2k} done exactly on the polynomial numerator.
struct AuxF {
  Poly1 quotient;     // numerator / x^{2k}
  Poly1 x_on_sigma;   // X(x, 0)

  double operator()(double x) const { return quotient.eval(x) / x_on_sigma.eval(x); }
};

AuxF aux_f(const PiecewiseField& z, const MonodromyData& d, Side side);

/// Ordered partition of (lo, hi) by the real roots of Y+(x,0)·Y-(x,0).
std::vector<SigmaSegment> sigma_regions(const PiecewiseField& z, double lo, double hi);

/// Kind of the switching line at a single abscissa (no root isolation).
SegmentKind sigma_kind_at(const PiecewiseField& z, double x);

}  // namespace foldcycle
