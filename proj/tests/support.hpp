#pragma once

#include <cmath>
#include <vector>

#include "foldcycle/field.hpp"

namespace fct {

using namespace foldcycle;

// upper = (1, −x^{2k−1} + c·x^{2k}), lower = (−1, −x^{2k−1}); V2 = 2c/(2k+1).
inline PiecewiseField sys_a(int k, double c) {
  const int n = 2 * k - 1;
  return {{Poly2::constant(1.0), Poly2::from_terms({{n, 0, -1.0}, {n + 1, 0, c}})},
          {Poly2::constant(-1.0), Poly2::from_terms({{n, 0, -1.0}})}};
}

// upper = (1, −x + y), lower = (−1, −x); g00+ = 1, V2 = 2/3.
inline PiecewiseField sys_g() {
  return {{Poly2::constant(1.0), Poly2::from_terms({{1, 0, -1.0}, {0, 1, 1.0}})},
          {Poly2::constant(-1.0), Poly2::from_terms({{1, 0, -1.0}})}};
}

// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(std::abs(y[i]));
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(y[i])) - my);
  }
  return sxy / sxx;
}

}  // namespace fct
