#pragma once

#include <cmath>

#include "special_functions.hpp"

namespace casimag {

/// Forward-mode dual number: value plus first derivative.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit from constants
  constexpr Dual(double value, double deriv) : v(value), d(deriv) {}

  static constexpr Dual variable(double x) { return {x, 1.0}; }
};

constexpr Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
constexpr Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
constexpr Dual operator-(Dual a) { return {-a.v, -a.d}; }
constexpr Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
constexpr Dual operator/(Dual a, Dual b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}
constexpr bool operator>(Dual a, double b) { return a.v > b; }
constexpr bool operator<(Dual a, double b) { return a.v < b; }

inline Dual exp(Dual a) {
  const double e = std::exp(a.v);
  return {e, e * a.d};
}
inline Dual expm1(Dual a) { return {std::expm1(a.v), std::exp(a.v) * a.d}; }
inline Dual log(Dual a) { return {std::log(a.v), a.d / a.v}; }
inline Dual log1p(Dual a) { return {std::log1p(a.v), a.d / (1.0 + a.v)}; }
inline Dual sqrt(Dual a) {
  const double s = std::sqrt(a.v);
  return {s, 0.5 * a.d / s};
}

/// Li_n(z) with dLi_n/dz = Li_{n-1}(z)/z; Li_1(z) = -ln(1 - z).
inline Dual polylog(int n, Dual z) {
  const double value = polylog(n, z.v);
  if (z.v == 0.0) return {value, z.d};
  const double lower = (n == 2) ? -std::log1p(-z.v) : polylog(n - 1, z.v);
  return {value, lower / z.v * z.d};
}

inline double value_of(double x) { return x; }
inline double value_of(Dual x) { return x.v; }

}  // namespace casimag
