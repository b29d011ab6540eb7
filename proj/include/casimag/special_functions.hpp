#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "error.hpp"

namespace casimag {

namespace detail {

// Borwein's acceleration of the alternating zeta series, exact for n = 30 to
// well below double precision for every s >= 2.
inline double zeta_borwein(int s) {
  constexpr int n = 30;
  std::array<double, n + 1> d{};
  double term = 1.0 / n;
  double acc = term;
  d[0] = n * acc;
  for (int i = 1; i <= n; ++i) {
    term *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i) * (2.0 * i - 1));
    acc += term;
    d[i] = n * acc;
  }
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    sum += sign * (d[k] - d[n]) / d[n] / std::pow(k + 1.0, s);
  }
  return -sum / (1.0 - std::pow(2.0, 1 - s));
}

// Li_n(z) for |z| <= 1/2 by its defining series.
inline double polylog_series(int n, double z) {
  double sum = 0.0;
  double zk = z;
  for (int k = 1; k < 200; ++k) {
    const double term = zk / std::pow(static_cast<double>(k), n);
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    zk *= z;
  }
  return sum;
}

}  // namespace detail

/// Riemann zeta function at integer argument n >= 2.
inline double zeta(int n) {
  if (n < 2) throw ConfigError("zeta: argument must be an integer >= 2");
  if (n > 60) return 1.0 + std::pow(2.0, -n);
  static const auto table = [] {
    std::array<double, 61> t{};
    for (int s = 2; s <= 60; ++s) t[s] = detail::zeta_borwein(s);
    return t;
  }();
  return table[n];
}

/// Polylogarithm Li_n(z) for integer n >= 2 and real z in [-1, 1].
inline double polylog(int n, double z) {
  if (n < 2) throw ConfigError("polylog: order must be an integer >= 2");
  if (!(std::abs(z) <= 1.0)) throw ConfigError("polylog: argument must satisfy |z| <= 1");
  if (z == 0.0) return 0.0;
  if (z == 1.0) return zeta(n);
  if (z < -0.5) return std::pow(2.0, 1 - n) * polylog(n, z * z) - polylog(n, -z);
  if (z <= 0.5) return detail::polylog_series(n, z);

  // Expansion about z = 1 in mu = ln z; converges for |mu| < 2 pi.
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double mu = std::log(z);
  double sum = 0.0;
  double power = 1.0;  // mu^k / k!
  for (int k = 0; k < n - 1; ++k) {
    sum += zeta(n - k) * power;
    power *= mu / (k + 1);
  }
  double harmonic = 0.0;
  for (int k = 1; k <= n - 1; ++k) harmonic += 1.0 / k;
  sum += power * (harmonic - std::log(-mu));
  power *= mu / n;
  sum += -0.5 * power;  // zeta(0)
  // Remaining terms use zeta(1 - 2j) = (-1)^j 2 (2j-1)! zeta(2j) / (2 pi)^{2j}.
  int k = n;
  double fact_ratio = 1.0 / (two_pi * two_pi);  // (2j-1)! / (2 pi)^{2j} for j = 1
  for (int j = 1; j < 40; ++j) {
    power *= mu / (k + 1);
    ++k;
    const double zneg = ((j % 2 == 0) ? 2.0 : -2.0) * fact_ratio * zeta(2 * j);
    const double term = zneg * power;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    power *= mu / (k + 1);
    ++k;
    fact_ratio *= (2.0 * j) * (2.0 * j + 1) / (two_pi * two_pi);
  }
  return sum;
}

/// Tail of the zeta series, sum_{k >= L} k^{-n}, for n >= 2 and L >= 1
/// (direct terms followed by an Euler-Maclaurin remainder).
inline double zeta_tail(int n, long L) {
  if (n < 2 || L < 1) throw ConfigError("zeta_tail: need n >= 2 and L >= 1");
  constexpr long direct = 16;
  double sum = 0.0;
  for (long k = L; k < L + direct; ++k) sum += std::pow(static_cast<double>(k), -n);
  const double M = static_cast<double>(L + direct);
  const double m_n = std::pow(M, -n);
  // int_M^inf x^{-n} + f(M)/2 - sum_j B_2j/(2j)! f^{(2j-1)}(M)
  double em = M * m_n / (n - 1) + 0.5 * m_n;
  constexpr std::array<double, 4> bernoulli{1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
  double rising = n;  // n (n+1) ... (n + 2j - 2)
  double fact = 2.0;  // (2j)!
  double power = m_n / M;
  for (int j = 1; j <= 4; ++j) {
    em += bernoulli[j - 1] / fact * rising * power;
    rising *= (n + 2.0 * j - 1) * (n + 2.0 * j);
    fact *= (2.0 * j + 1) * (2.0 * j + 2);
    power /= M * M;
  }
  return sum + em;
}

/// zeta'(3), used by the low-temperature relaxation term.
inline constexpr double zeta_prime_3 = -0.19812624288563685333;

}  // namespace casimag
