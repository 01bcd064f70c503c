#include "foldcycle/poly.hpp"

#include <limits>

namespace foldcycle {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DuplicateTerm: return "DuplicateTerm";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::SingularX: return "SingularX";
    case ErrorCode::DegenerateContact: return "DegenerateContact";
    case ErrorCode::NotMonodromic: return "NotMonodromic";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::WrongSign: return "WrongSign";
    case ErrorCode::ScaleSeparationViolated: return "ScaleSeparationViolated";
    case ErrorCode::DivisionResidual: return "DivisionResidual";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NoReturn: return "NoReturn";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NotInWindow: return "NotInWindow";
    case ErrorCode::NonHyperbolic: return "NonHyperbolic";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::VerificationMismatch: return "VerificationMismatch";
  }
  return "Unknown";
}

double eval_error_bound(const Poly1& p, double x) {
  double sum = 0.0;
  double xp = 1.0;
  for (int i = 0; i <= p.degree(); ++i) {
    sum += std::abs(p[i] * xp);
    xp *= x;
  }
  const double n = static_cast<double>(std::max(p.degree() + 1, 1));
  return 4.0 * n * std::numeric_limits<double>::epsilon() * sum;
}

namespace {

double bisect(const Poly1& p, double lo, double hi, double flo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p.eval(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> real_roots(const Poly1& p, double lo, double hi) {
  std::vector<double> roots;
  if (p.degree() <= 0 || !(lo < hi)) return roots;
  if (p.degree() == 1) {
    const double r = -p[0] / p[1];
    if (r >= lo && r <= hi) roots.push_back(r);
    return roots;
  }

  std::vector<double> knots{lo};
  for (double c : real_roots(p.derivative(), lo, hi)) {
    if (c > knots.back()) knots.push_back(c);
  }
  if (hi > knots.back()) knots.push_back(hi);

  auto is_root = [&](double x, double fx) { return std::abs(fx) <= eval_error_bound(p, x); };

  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const double u = knots[s];
    const double v = knots[s + 1];
    const double fu = p.eval(u);
    const double fv = p.eval(v);
    if (is_root(u, fu)) {
      roots.push_back(u);
      continue;
    }
    if (is_root(v, fv)) continue;  // picked up as the left knot of the next piece
    if ((fu < 0.0) != (fv < 0.0)) roots.push_back(bisect(p, u, v, fu));
  }
  if (is_root(knots.back(), p.eval(knots.back()))) roots.push_back(knots.back());

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || r - unique.back() > 1e-12 * std::max(1.0, std::abs(r))) unique.push_back(r);
  }
  return unique;
}

}  // namespace foldcycle
