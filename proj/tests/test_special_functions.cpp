#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "casimag/dual.hpp"
#include "casimag/special_functions.hpp"

using namespace casimag;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Direct partial sums with an integral tail bound, independent of the library's summation paths.
double direct_polylog(int n, double z) {
  long double sum = 0.0L;
  long double zk = 1.0L;
  for (long k = 1; k < 2'000'000; ++k) {
    zk *= z;
    const long double term = zk / std::pow(static_cast<long double>(k), n);
    sum += term;
    if (std::abs(term) < 1e-22L) break;
  }
  return static_cast<double>(sum);
}

double direct_zeta(int n) {
  long double sum = 0.0L;
  const long N = 100000;
  for (long k = N; k >= 1; --k) sum += 1.0L / std::pow(static_cast<long double>(k), n);
  // Euler-Maclaurin: int_N^inf + f(N)/2 correction applied to the sum up to N
  const long double Nn = std::pow(static_cast<long double>(N), n);
  sum += N / ((n - 1) * Nn) - 0.5L / Nn;
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("zeta at integer arguments", "[special]") {
  CHECK_THAT(zeta(2), WithinAbs(std::numbers::pi * std::numbers::pi / 6.0, 1e-15));
  CHECK_THAT(zeta(3), WithinAbs(1.2020569031595942854, 1e-15));
  CHECK_THAT(zeta(4), WithinAbs(std::pow(std::numbers::pi, 4) / 90.0, 1e-15));
  CHECK_THAT(zeta(5), WithinAbs(1.0369277551433699263, 1e-13));
  CHECK_THAT(zeta(5), WithinAbs(direct_zeta(5), 1e-13));
  CHECK_THAT(zeta(3), WithinAbs(direct_zeta(3), 1e-13));
  CHECK_THROWS_AS(zeta(1), ConfigError);
}

TEST_CASE("polylog endpoints", "[special]") {
  CHECK(polylog(3, 0.0) == 0.0);
  for (int n = 2; n <= 5; ++n) CHECK_THAT(polylog(n, 1.0) - zeta(n), WithinAbs(0.0, 1e-13));
  CHECK_THAT(polylog(2, -1.0), WithinAbs(-std::numbers::pi * std::numbers::pi / 12.0, 1e-13));
  CHECK_THAT(polylog(3, -1.0), WithinAbs(-0.75 * zeta(3), 1e-13));
  CHECK_THROWS_AS(polylog(3, 1.5), ConfigError);
  CHECK_THROWS_AS(polylog(1, 0.5), ConfigError);
}

TEST_CASE("polylog against direct summation", "[special]") {
  for (int n : {2, 3, 4, 5}) {
    for (double z : {-0.9, -0.6, -0.3, 0.1, 0.45, 0.55, 0.7, 0.9, 0.97}) {
      INFO("n = " << n << ", z = " << z);
      CHECK_THAT(polylog(n, z), WithinAbs(direct_polylog(n, z), 1e-13));
    }
  }
}

TEST_CASE("polylog of the squared nickel zero-frequency coefficient", "[special]") {
  const double r = 109.0 / 111.0;
  const double z = r * r;
  // Independent high-precision value of Li_3(z).
  const double exact = 1.1454265623423062555;
  CHECK_THAT(polylog(3, z), WithinAbs(exact, 1e-13));
  // Large-mu0 approximation zeta(3) - 2 pi^2/(3 mu0).
  const double approx = zeta(3) - 2.0 * std::numbers::pi * std::numbers::pi / (3.0 * 110.0);
  CHECK_THAT(approx, WithinRel(exact, 3e-3));
}

TEST_CASE("polylog properties", "[special][property]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 5; ++n) {
    double prev = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double v = polylog(n, i / 200.0);
      CHECK(v > prev);
      prev = v;
    }
  }
  for (int i = 0; i < 200; ++i) {
    const double z = 1e-6 * u(rng);
    for (int n = 2; n <= 5; ++n) CHECK(std::abs(polylog(n, z) - z) <= 2.0 * z * z);
  }
}

TEST_CASE("zeta tail", "[special]") {
  CHECK_THAT(zeta_tail(3, 10), WithinRel(0.0055249174854010337311, 1e-13));
  CHECK_THAT(zeta_tail(3, 1), WithinRel(zeta(3), 1e-13));
  CHECK_THAT(zeta_tail(5, 3), WithinRel(zeta(5) - 1.0 - 1.0 / 32.0, 1e-13));
  CHECK_THROWS_AS(zeta_tail(1, 5), ConfigError);
}

TEST_CASE("zeta prime at 3", "[special]") {
  // -sum ln k / k^3, summed directly with an integral tail.
  long double s = 0.0L;
  const long N = 200000;
  for (long k = N; k >= 2; --k) s += std::log(static_cast<long double>(k)) / std::pow(static_cast<long double>(k), 3);
  const long double lnN = std::log(static_cast<long double>(N));
  s += (2.0L * lnN + 1.0L) / (4.0L * N * N) - 0.5L * lnN / std::pow(static_cast<long double>(N), 3);
  CHECK_THAT(zeta_prime_3, WithinAbs(-static_cast<double>(s), 1e-13));
}

TEST_CASE("dual numbers differentiate", "[special][dual]") {
  const Dual x = Dual::variable(0.3);
  const Dual y = exp(x) * log1p(x) / (1.0 + x * x);
  auto f = [](double v) { return std::exp(v) * std::log1p(v) / (1.0 + v * v); };
  const double h = 1e-5;
  CHECK_THAT(y.v, WithinRel(f(0.3), 1e-15));
  CHECK_THAT(y.d, WithinRel((f(0.3 + h) - f(0.3 - h)) / (2 * h), 1e-9));
  const Dual p = polylog(3, Dual::variable(0.4));
  CHECK_THAT(p.d, WithinRel(polylog(2, 0.4) / 0.4, 1e-13));
}
