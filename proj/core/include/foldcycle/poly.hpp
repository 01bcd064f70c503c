#pragma once

// Exact-coefficient univariate and bivariate polynomials.
//
// Coefficients are double by default; the templates also accept an exact
// rational scalar (see Rational below) for identity checks whose residuals
// must be provably zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "foldcycle/error.hpp"

namespace foldcycle {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxDegree = 64;

/// Arithmetic results with |c| below this multiple of the summed magnitude of
/// their contributions are cancellation residue and are dropped.
inline constexpr double kCanonicalDrop = 1e-14;

namespace detail {

template <class T>
bool is_negligible(const T& v, const T& magnitude) {
  if constexpr (std::is_floating_point_v<T>) {
    return v == T(0) || std::abs(v) < kCanonicalDrop * magnitude;
  } else {
    return v == T(0);
  }
}

template <class T>
T magnitude_of(const T& v) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::abs(v);
  } else {
    return T(0);
  }
}

template <class T>
T binomial(int n, int k) {
  T r(1);
  for (int i = 1; i <= k; ++i) {
    r *= T(n - k + i);
    r /= T(i);
  }
  return r;
}

template <class T>
T falling_factorial(int n, int k) {
  T r(1);
  for (int i = 0; i < k; ++i) r *= T(n - i);
  return r;
}

template <class T>
T ipow(const T& base, int e) {
  T r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

inline void check_degree(int deg) {
  if (deg > kMaxDegree) {
    throw Error(ErrorCode::DegreeOverflow,
                "degree " + std::to_string(deg) + " exceeds cap " + std::to_string(kMaxDegree));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Univariate
// ---------------------------------------------------------------------------

template <class T>
class BasicPoly1 {
 public:
  BasicPoly1() = default;

  explicit BasicPoly1(std::vector<T> ascending) : coeffs_(std::move(ascending)) {
    trim_exact();
    detail::check_degree(degree());
  }

  static BasicPoly1 monomial(int power, T c) {
    std::vector<T> v(static_cast<std::size_t>(power) + 1, T(0));
    v.back() = std::move(c);
    return BasicPoly1(std::move(v));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }

  const std::vector<T>& coeffs() const { return coeffs_; }

  T operator[](int power) const {
    if (power < 0 || power > degree()) return T(0);
    return coeffs_[static_cast<std::size_t>(power)];
  }

  T eval(const T& x) const {
    T acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  BasicPoly1 derivative(int n = 1) const {
    if (n <= 0) return *this;
    if (n > degree()) return {};
    std::vector<T> out(coeffs_.size() - static_cast<std::size_t>(n));
    for (int i = n; i <= degree(); ++i) {
      out[static_cast<std::size_t>(i - n)] =
          coeffs_[static_cast<std::size_t>(i)] * detail::falling_factorial<T>(i, n);
    }
    return BasicPoly1(std::move(out));
  }

  /// q(x) = p(x + h). Coefficients are kept as computed (no drop).
  BasicPoly1 shifted(const T& h) const {
    std::vector<T> out(coeffs_.size(), T(0));
    for (int i = 0; i <= degree(); ++i) {
      T hp(1);
      for (int m = i; m >= 0; --m) {
        out[static_cast<std::size_t>(m)] +=
            coeffs_[static_cast<std::size_t>(i)] * detail::binomial<T>(i, m) * hp;
        hp *= h;
      }
    }
    return BasicPoly1(std::move(out));
  }

  /// Quotient by x^n; `remainder` receives the dropped low coefficients.
  BasicPoly1 divide_by_x_power(int n, std::vector<T>* remainder = nullptr) const {
    if (remainder) {
      remainder->clear();
      for (int i = 0; i < n; ++i) remainder->push_back((*this)[i]);
    }
    if (n >= static_cast<int>(coeffs_.size())) return {};
    return BasicPoly1(std::vector<T>(coeffs_.begin() + n, coeffs_.end()));
  }

  /// Euclidean norm of the coefficient vector.
  double norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) {
      const double d = static_cast<double>(c);
      s += d * d;
    }
    return std::sqrt(s);
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(static_cast<double>(c)));
    return m;
  }

  /// Zeroes coefficients below kCanonicalDrop relative to the largest one.
  BasicPoly1 canonical() const {
    BasicPoly1 r = *this;
    const T scale = [&] {
      T m(0);
      for (const auto& c : coeffs_) m = std::max(m, detail::magnitude_of(c));
      return m;
    }();
    for (auto& c : r.coeffs_) {
      if (detail::is_negligible(c, scale)) c = T(0);
    }
    r.trim_exact();
    return r;
  }

  friend BasicPoly1 operator+(const BasicPoly1& a, const BasicPoly1& b) {
    std::vector<T> out(std::max(a.coeffs_.size(), b.coeffs_.size()), T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[i] += b.coeffs_[i];
    return BasicPoly1(std::move(out));
  }

  friend BasicPoly1 operator-(const BasicPoly1& a) { return a * T(-1); }
  friend BasicPoly1 operator-(const BasicPoly1& a, const BasicPoly1& b) { return a + (-b); }

  friend BasicPoly1 operator*(const BasicPoly1& a, const BasicPoly1& b) {
    if (a.is_zero() || b.is_zero()) return {};
    detail::check_degree(a.degree() + b.degree());
    std::vector<T> out(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return BasicPoly1(std::move(out));
  }

  friend BasicPoly1 operator*(const BasicPoly1& a, const T& s) {
    std::vector<T> out = a.coeffs_;
    for (auto& c : out) c *= s;
    return BasicPoly1(std::move(out));
  }
  friend BasicPoly1 operator*(const T& s, const BasicPoly1& a) { return a * s; }

  friend bool operator==(const BasicPoly1& a, const BasicPoly1& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim_exact() {
    while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

// ---------------------------------------------------------------------------
// Bivariate
// ---------------------------------------------------------------------------

enum class Var { X, Y };

template <class T>
struct Term {
  int i;  // power of x
  int j;  // power of y
  T coeff;
};

template <class T>
class BasicPoly2 {
 public:
  using Key = std::pair<int, int>;

  BasicPoly2() = default;

  /// Triples may come in any order; a repeated (i, j) is an input error.
  static BasicPoly2 from_terms(std::span<const Term<T>> terms) {
    BasicPoly2 p;
    for (const auto& t : terms) {
      if (t.i < 0 || t.j < 0) {
        throw Error(ErrorCode::InvalidArgument, "negative exponent in polynomial term");
      }
      detail::check_degree(t.i + t.j);
      if (!p.terms_.emplace(Key{t.i, t.j}, t.coeff).second) {
        throw Error(ErrorCode::DuplicateTerm,
                    "duplicate monomial x^" + std::to_string(t.i) + " y^" + std::to_string(t.j));
      }
    }
    std::erase_if(p.terms_, [](const auto& kv) { return kv.second == T(0); });
    return p;
  }

  static BasicPoly2 from_terms(std::initializer_list<Term<T>> terms) {
    return from_terms(std::span<const Term<T>>(terms.begin(), terms.size()));
  }

  static BasicPoly2 constant(T c) { return monomial(0, 0, std::move(c)); }

  static BasicPoly2 monomial(int i, int j, T c) {
    const Term<T> t{i, j, std::move(c)};
    return from_terms(std::span<const Term<T>>(&t, 1));
  }

  /// Lift a polynomial in x.
  static BasicPoly2 from_x(const BasicPoly1<T>& p) {
    BasicPoly2 r;
    for (int i = 0; i <= p.degree(); ++i) {
      if (p[i] != T(0)) r.terms_[{i, 0}] = p[i];
    }
    return r;
  }

  const std::map<Key, T>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  std::vector<Term<T>> to_terms() const {
    std::vector<Term<T>> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.push_back({k.first, k.second, c});
    return out;
  }

  int degree() const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
    return d;
  }

  int degree_in(Var v) const {
    int d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, v == Var::X ? k.first : k.second);
    return d;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(static_cast<double>(c)));
    return m;
  }

  T eval(const T& x, const T& y) const {
    T acc(0);
    for (const auto& [k, c] : terms_) acc += c * detail::ipow(x, k.first) * detail::ipow(y, k.second);
    return acc;
  }

  BasicPoly2 partial(Var v, int n) const {
    if (n <= 0) return *this;
    BasicPoly2 r;
    for (const auto& [k, c] : terms_) {
      const int p = v == Var::X ? k.first : k.second;
      if (p < n) continue;
      const Key nk = v == Var::X ? Key{k.first - n, k.second} : Key{k.first, k.second - n};
      r.terms_[nk] = c * detail::falling_factorial<T>(p, n);
    }
    return r;
  }

  /// q(x, y) = p(x + h, y) by binomial expansion.
  BasicPoly2 shift_x(const T& h) const {
    BasicPoly2 r;
    std::map<Key, T> mag;
    for (const auto& [k, c] : terms_) {
      T hp(1);
      for (int m = k.first; m >= 0; --m) {
        const T t = c * detail::binomial<T>(k.first, m) * hp;
        r.terms_[{m, k.second}] += t;
        mag[{m, k.second}] += detail::magnitude_of(t);
        hp *= h;
      }
    }
    r.canonicalize(mag);
    return r;
  }

  /// p(x, 0).
  BasicPoly1<T> restrict_sigma() const {
    std::vector<T> out;
    for (const auto& [k, c] : terms_) {
      if (k.second != 0) continue;
      if (static_cast<int>(out.size()) <= k.first) out.resize(static_cast<std::size_t>(k.first) + 1, T(0));
      out[static_cast<std::size_t>(k.first)] = c;
    }
    return BasicPoly1<T>(std::move(out));
  }

  T taylor_coeff(int i, int j) const {
    const auto it = terms_.find({i, j});
    return it == terms_.end() ? T(0) : it->second;
  }

  friend BasicPoly2 operator+(const BasicPoly2& a, const BasicPoly2& b) {
    BasicPoly2 r = a;
    std::map<Key, T> mag;
    for (const auto& [k, c] : a.terms_) mag[k] += detail::magnitude_of(c);
    for (const auto& [k, c] : b.terms_) {
      r.terms_[k] += c;
      mag[k] += detail::magnitude_of(c);
    }
    r.canonicalize(mag);
    return r;
  }

  friend BasicPoly2 operator-(const BasicPoly2& a) { return a * T(-1); }
  friend BasicPoly2 operator-(const BasicPoly2& a, const BasicPoly2& b) { return a + (-b); }

  friend BasicPoly2 operator*(const BasicPoly2& a, const BasicPoly2& b) {
    if (a.is_zero() || b.is_zero()) return {};
    detail::check_degree(a.degree() + b.degree());
    BasicPoly2 r;
    std::map<Key, T> mag;
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        const Key key{ka.first + kb.first, ka.second + kb.second};
        const T t = ca * cb;
        r.terms_[key] += t;
        mag[key] += detail::magnitude_of(t);
      }
    }
    r.canonicalize(mag);
    return r;
  }

  friend BasicPoly2 operator*(const BasicPoly2& a, const T& s) {
    BasicPoly2 r = a;
    for (auto& [k, c] : r.terms_) c *= s;
    std::erase_if(r.terms_, [](const auto& kv) { return kv.second == T(0); });
    return r;
  }
  friend BasicPoly2 operator*(const T& s, const BasicPoly2& a) { return a * s; }

  friend bool operator==(const BasicPoly2& a, const BasicPoly2& b) { return a.terms_ == b.terms_; }

 private:
  void canonicalize(const std::map<Key, T>& magnitude) {
    std::erase_if(terms_, [&](const auto& kv) { return detail::is_negligible(kv.second, magnitude.at(kv.first)); });
  }

  std::map<Key, T> terms_;
};

using Poly1 = BasicPoly1<double>;
using Poly2 = BasicPoly2<double>;
using RationalPoly1 = BasicPoly1<Rational>;

/// Real roots of p in [lo, hi], sorted, multiple roots reported once.
/// Isolation recurses on the critical points (roots of p'), so every
/// monotone piece holds at most one root, refined by bisection.
std::vector<double> real_roots(const Poly1& p, double lo, double hi);

/// Rounding bound for evaluating p at x: (#terms)·eps·Σ|c_i x^i|.
double eval_error_bound(const Poly1& p, double x);

}  // namespace foldcycle
