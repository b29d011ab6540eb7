#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "constants.hpp"
#include "dual.hpp"
#include "error.hpp"
#include "materials.hpp"
#include "special_functions.hpp"
#include "validity.hpp"

namespace casimag {

/// Expansions in Lambda are only attempted for Lambda < 0.25.
inline constexpr double perturbative_lambda_limit = 0.25;

inline void require_perturbative(double Lambda, const std::string& what) {
  check_gate(Lambda > 0.0 && Lambda < perturbative_lambda_limit,
             what + ": expansion parameter Lambda = " + std::to_string(Lambda) + " is outside (0, 0.25)");
}

/// F(zeta, y) through second order in Lambda (plasma model, constant permeability).
inline double integrand_expansion(double zeta, double y, double Lambda) {
  if (!(y > 0.0) || !(zeta >= 0.0)) throw ConfigError("integrand_expansion: need y > 0 and zeta >= 0");
  if (zeta > y) throw ConfigError("integrand_expansion: zeta must not exceed y");
  const double em1 = std::expm1(-y);
  const double z2y2 = zeta * zeta + y * y;
  const double z4y4 = zeta * zeta * zeta * zeta + y * y * y * y;
  return 2.0 * std::log(-em1) + 2.0 * Lambda * z2y2 / (y * std::expm1(y)) -
         2.0 * Lambda * Lambda * std::exp(-y) * z4y4 / (em1 * em1 * y * y);
}

struct AFunctions {
  double A0 = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
};

namespace detail {

// int_0^y z^m cos(k z) dz for m in {0, 2, 4}; power series when k y is small.
inline double cosine_moment(int m, double y, double k) {
  const double ky = k * y;
  if (ky < 2.0) {
    double sum = 0.0;
    double term = std::pow(y, m + 1);  // (-1)^j (k y)^{2j} y^{m+1} / (2j)!
    for (int j = 0; j < 30; ++j) {
      const double add = term / (2 * j + m + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
      term *= -ky * ky / ((2.0 * j + 1) * (2.0 * j + 2));
    }
    return sum;
  }
  const double s = std::sin(ky);
  const double c = std::cos(ky);
  switch (m) {
    case 0: return s / k;
    case 2: return y * y * s / k + 2.0 * y * c / (k * k) - 2.0 * s / (k * k * k);
    default: {
      const double k2 = k * k;
      return y * y * y * y * s / k + 4.0 * y * y * y * c / k2 - 12.0 * y * y * s / (k2 * k) -
             24.0 * y * c / (k2 * k2) + 24.0 * s / (k2 * k2 * k);
    }
  }
}

}  // namespace detail

/// A-functions: int_0^y cos(l t z) F(z, y) dz = A0 + A1 Lambda + A2 Lambda^2.
inline AFunctions a_functions(long l, double t, double y) {
  if (l < 1 || !(t > 0.0) || !(y > 0.0)) throw ConfigError("a_functions: need l >= 1, t > 0, y > 0");
  const double k = static_cast<double>(l) * t;
  const double c0 = detail::cosine_moment(0, y, k);
  const double c2 = detail::cosine_moment(2, y, k);
  const double c4 = detail::cosine_moment(4, y, k);
  const double em1 = std::expm1(-y);
  const double y2 = y * y;
  AFunctions a;
  a.A0 = 2.0 * std::log(-em1) * c0;
  a.A1 = 2.0 / (y * std::expm1(y)) * (c2 + y2 * c0);
  a.A2 = -2.0 * std::exp(-y) / (em1 * em1 * y2) * (c4 + y2 * y2 * c0);
  return a;
}

template <class T>
struct BCoefficientsT {
  T B0;
  T B1;
  T B2;
};
using BCoefficients = BCoefficientsT<double>;

/// B-coefficients as functions of x = l t, for double or Dual arguments.
template <class T>
BCoefficientsT<T> b_coefficients_at(T x) {
  using std::exp;
  using std::expm1;
  using std::log1p;
  constexpr double pi = std::numbers::pi;
  const T u = pi * x;
  const T q = exp(-2.0 * u);  // e^{-2 pi x}
  T coth, csch2, bose;      // bose = 1 / (e^{2 pi x} - 1)
  if (value_of(u) > 20.0) {
    coth = T(1.0);
    csch2 = 4.0 * q;
    bose = q;
  } else {
    const T one_minus_q = -expm1(-2.0 * u);
    coth = (1.0 + q) / one_minus_q;
    csch2 = 4.0 * q / (one_minus_q * one_minus_q);
    bose = q / one_minus_q;
  }
  const T x2 = x * x;
  const T x3 = x2 * x;
  const T x4 = x2 * x2;
  const T x5 = x4 * x;
  BCoefficientsT<T> b;
  b.B0 = 2.0 * (1.0 / x4 - pi * coth / (2.0 * x3) - pi * pi * csch2 / (2.0 * x2));
  b.B1 = -2.0 * (pi * coth / x3 - 4.0 / x4 + pi * pi * csch2 / x2 + 2.0 * pi * pi * pi * coth * csch2 / x);
  // 6 pi (coth - 1) / x^3 is written as 12 pi bose / x^3 to avoid cancellation.
  const T bracket = -2.0 * coth * coth - csch2 + coth / (pi * x) - 1.0 / (pi * pi * x2);
  b.B2 = 2.0 * (pi / x5 - 12.0 * pi * bose / x3 + 2.0 * pi * pi * pi * pi * csch2 * bracket +
                12.0 * log1p(-q) / x4 - 6.0 * polylog(2, q) / (pi * x5));
  return b;
}

inline BCoefficients b_coefficients(long l, double t) {
  if (l < 1 || !(t > 0.0)) throw ConfigError("b_coefficients: need l >= 1 and t > 0");
  return b_coefficients_at(static_cast<double>(l) * t);
}

/// Result of an l-series with an analytic power-law tail.
template <class T>
struct SeriesSum {
  T value{};
  long terms = 0;  // explicit terms before the analytic tail
};

/// sum_{l >= 1} [B0 + B1 L + B2 L^2](l t). Beyond pi l t > 40 the exponentially small parts are
/// below 1e-34 relative and the remaining power laws are summed with zeta tails.
template <class T>
SeriesSum<T> b_series(T t, T Lambda, long l_max = 1'000'000) {
  constexpr double pi = std::numbers::pi;
  const long L = std::max<long>(8, static_cast<long>(std::ceil(40.0 / (pi * value_of(t)))));
  if (L > l_max) throw ConvergenceError("B-series needs " + std::to_string(L) + " terms, above l_max");
  SeriesSum<T> s;
  T sum(0.0);
  for (long l = 1; l < L; ++l) {
    const BCoefficientsT<T> b = b_coefficients_at(static_cast<double>(l) * t);
    sum = sum + b.B0 + Lambda * (b.B1 + Lambda * b.B2);
  }
  const T t3 = t * t * t;
  sum = sum + (-pi - 2.0 * pi * Lambda) * zeta_tail(3, L) / t3 + (2.0 + 8.0 * Lambda) * zeta_tail(4, L) / (t3 * t) +
        2.0 * pi * Lambda * Lambda * zeta_tail(5, L) / (t3 * t * t);
  s.value = sum;
  s.terms = L - 1;
  return s;
}

/// Smallest t accepted by the B-series paths; below it x = l t is small enough for the
/// closed forms to lose digits to cancellation.
inline constexpr double series_min_t = 0.5;

/// Thermal correction from the B-coefficient series, J/m^2.
inline double thermal_correction_series(const PlateConfiguration& cfg, double Lambda, long l_max = 1'000'000) {
  require_perturbative(Lambda, "thermal_correction_series");
  const DimensionlessState s = dimensionless_state(cfg);
  check_gate(s.t > series_min_t, "thermal_correction_series: needs t > 0.5");
  const double a = cfg.separation();
  return constants::hbar * constants::c / (16.0 * constants::pi * constants::pi * a * a * a) *
         b_series(s.t, Lambda, l_max).value;
}

/// Thermal correction to the pressure, -d/da of the B-series thermal correction at fixed T
/// (Lambda scales as 1/a); Pa.
inline double thermal_pressure_series(const PlateConfiguration& cfg, double Lambda, long l_max = 1'000'000) {
  require_perturbative(Lambda, "thermal_pressure_series");
  check_gate(dimensionless_state(cfg).t > series_min_t, "thermal_pressure_series: needs t > 0.5");
  using namespace constants;
  const double a0 = cfg.separation();
  const Dual a = Dual::variable(a0);
  const Dual t = hbar * c / (2.0 * k_B * cfg.temperature()) / a;
  const Dual L = Lambda * a0 / a;
  const Dual F = hbar * c / (16.0 * pi * pi * a * a * a) * b_series(t, L, l_max).value;
  return -F.d;
}

inline constexpr double low_t_min_t = 10.0;

/// Power-law part of the low-temperature asymptote, in units of hbar c / (8 pi a^3) with opposite sign.
inline double low_t_power_bracket(double t, double Lambda) {
  constexpr double pi = std::numbers::pi;
  const double t3 = t * t * t;
  const double t4 = t3 * t;
  return zeta(3) / (2.0 * t3) - pi * pi * pi / (90.0 * t4) + Lambda * (zeta(3) / t3 - 2.0 * pi * pi * pi / (45.0 * t4)) -
         Lambda * Lambda * zeta(5) / (t4 * t);
}

/// Exponentially small part of the same bracket.
inline double low_t_exponential_bracket(double t, double Lambda) {
  constexpr double pi = std::numbers::pi;
  const double e = std::exp(-2.0 * pi * t);
  return 2.0 * pi / (t * t) * e + Lambda * 8.0 * pi * pi / t * e + Lambda * Lambda * 16.0 * pi * pi * pi * e;
}

/// Low-temperature thermal correction including the leading exponential terms, J/m^2.
inline double low_T_free_energy(const PlateConfiguration& cfg, double Lambda) {
  require_perturbative(Lambda, "low_T_free_energy");
  const DimensionlessState s = dimensionless_state(cfg);
  check_gate(s.t > low_t_min_t, "low_T_free_energy: asymptote needs t > 10");
  const double a = cfg.separation();
  return -constants::hbar * constants::c / (8.0 * constants::pi * a * a * a) *
         (low_t_power_bracket(s.t, Lambda) + low_t_exponential_bracket(s.t, Lambda));
}

/// Low-temperature entropy, J/(K m^2), exponentially small terms omitted.
inline double entropy_asymptotic(const PlateConfiguration& cfg, double Lambda) {
  require_perturbative(Lambda, "entropy_asymptotic");
  const DimensionlessState s = dimensionless_state(cfg);
  check_gate(s.t > low_t_min_t, "entropy_asymptotic: asymptote needs t > 10");
  constexpr double pi = std::numbers::pi;
  const double tau = s.tau;
  const double a = cfg.separation();
  const double bracket = 1.5 * zeta(3) - pi * pi * tau / 45.0 + Lambda * (3.0 * zeta(3) - 4.0 * pi * pi * tau / 45.0) -
                         Lambda * Lambda * 5.0 * zeta(5) * tau * tau / (4.0 * pi * pi);
  return constants::k_B * tau * tau / (16.0 * a * a * pi * pi * pi) * bracket;
}

}  // namespace casimag
