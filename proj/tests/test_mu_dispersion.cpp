#include <boost/math/quadrature/exp_sinh.hpp>
#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "casimag/lifshitz_numeric.hpp"
#include "casimag/mu_dispersion.hpp"

using namespace casimag;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
const double hbar_c = constants::hbar * constants::c;

double temperature_for(double a, double t) { return hbar_c / (2.0 * a * constants::k_B * t); }

MaterialModel debye_plate(double mu0, double a, double ae, double lambda_p = 2.0 * pi * 40e-9) {
  return MaterialModel::from_wavelength("X", lambda_p, NoRelaxation{}, mu0, DebyePermeability{constants::c / (2.0 * a) / ae});
}

}  // namespace

TEST_CASE("static-permeability thermal correction", "[mu]") {
  const MaterialModel au = MaterialModel::from_wavelength("Au", 137e-9, NoRelaxation{}, 1.0);
  const PlateConfiguration plain(au, au, 4e-6, 50.0);
  const DimensionlessState s = dimensionless_state(plain);
  CHECK(static_mu_zero_frequency_term(plain, s.Lambda, s.Lambda1) == 0.0);
  CHECK_THAT(thermal_correction_static_mu_zero_only(plain, s.Lambda, s.Lambda1),
             WithinRel(thermal_correction_series(plain, s.Lambda1), 1e-14));

  const PlateConfiguration ni(nickel(), nickel(), 5e-6, 300.0);
  const DimensionlessState n = dimensionless_state(ni);
  NumericOptions opt;
  opt.mu_mode = PermeabilityMode::static_zero_term_only;
  const double numeric = free_energy_matsubara(ni, Permittivity::plasma, opt).thermal_correction;
  const double series = thermal_correction_static_mu_zero_only(ni, n.Lambda, n.Lambda1);
  // The zero-frequency bracket carries an 8 Lambda^2 relative truncation.
  CHECK_THAT(series, WithinRel(numeric, 0.03));

  double previous = std::abs(series);
  for (double T : {30.0, 3.0, 0.3}) {
    const double v = std::abs(thermal_correction_static_mu_zero_only(ni.at_temperature(T), n.Lambda, n.Lambda1));
    CHECK(v < previous);
    previous = v;
  }
  CHECK_THROWS_AS(thermal_correction_static_mu_zero_only(ni.at_temperature(5e-4), n.Lambda, n.Lambda1), ValidityError);
  CHECK_NOTHROW(thermal_correction_static_mu_zero_only(ni.at_temperature(5e-4), n.Lambda, n.Lambda1, 1e-4));
}

TEST_CASE("static-permeability zero-frequency term against its integrals", "[mu]") {
  for (double a : {20e-6, 40e-6}) {
    const PlateConfiguration cfg(nickel(), nickel(), a, 1.0);
    const DimensionlessState s = dimensionless_state(cfg);
    const double exact = static_mu_zero_frequency_term_exact(cfg);
    INFO("a = " << a);
    // The next bracket coefficient is 8 Lambda^2 (see the Lambda^3 term of 1/(1 + 2 Lambda)^2).
    CHECK_THAT(static_mu_zero_frequency_term(cfg, s.Lambda, s.Lambda1), WithinRel(exact, 10.0 * s.Lambda * s.Lambda));
  }
}

TEST_CASE("static-permeability zero-frequency term within 5 Lambda^3", "[mu][!shouldfail]") {
  const PlateConfiguration cfg(nickel(), nickel(), 5e-6, 300.0);
  const DimensionlessState s = dimensionless_state(cfg);
  const double exact = static_mu_zero_frequency_term_exact(cfg);
  CHECK(std::abs(static_mu_zero_frequency_term(cfg, s.Lambda, s.Lambda1) - exact) <=
        std::max(5.0 * std::pow(s.Lambda, 3), 1e-9) * std::abs(exact));
}

TEST_CASE("pressure correction is the separation derivative", "[mu]") {
  const PlateConfiguration base(nickel(), nickel(), 5e-6, 300.0);
  for (double a : {3e-6, 4e-6, 5e-6, 6e-6, 7e-6}) {
    const PlateConfiguration cfg = base.at_separation(a);
    const DimensionlessState s = dimensionless_state(cfg);
    const FiniteDifference d = richardson_derivative(
        [&](double x) {
          const PlateConfiguration c = cfg.at_separation(x);
          const DimensionlessState cs = dimensionless_state(c);
          return thermal_correction_static_mu_zero_only(c, cs.Lambda, cs.Lambda1);
        },
        a, a / 200.0);
    INFO("a = " << a);
    CHECK(std::abs(pressure_correction(cfg, s.Lambda, s.Lambda1) + d.value) <=
          std::max(3.0 * d.error_estimate, 1e-8 * std::abs(d.value)));
  }
}

TEST_CASE("Debye entropy correction", "[mu]") {
  const double a = 5e-6;
  const double tau = 0.01;
  const double T = temperature_for(a, 2.0 * pi / tau);
  const PlateConfiguration cfg(debye_plate(110.0, a, 0.1), debye_plate(110.0, a, 0.1), a, T);
  CHECK_THAT(entropy_correction_debye(cfg, 0.05), WithinRel(-4.3622545426544306e-19, 1e-12));

  const PlateConfiguration plain(debye_plate(1.0, a, 0.1), debye_plate(1.0, a, 0.1), a, T);
  CHECK(entropy_correction_debye(plain, 0.05) == 0.0);
  CHECK(debye_free_energy_term(plain, 0.05) == 0.0);

  // Linear in tau, nonpositive, and dominant over the tau^2 plasma entropy as tau -> 0.
  double previous_ratio = 0.0;
  for (double f : {1.0, 0.1, 0.01}) {
    const PlateConfiguration c = cfg.at_temperature(f * T);
    const double dS = entropy_correction_debye(c, 0.05);
    CHECK(dS <= 0.0);
    CHECK_THAT(dS, WithinRel(f * entropy_correction_debye(cfg, 0.05), 1e-12));
    const double ratio = std::abs(dS) / entropy_asymptotic(c, 0.05);
    CHECK(ratio > previous_ratio);
    previous_ratio = ratio;
  }

  CHECK_THROWS_AS(entropy_correction_debye(PlateConfiguration(nickel(), nickel(), a, T), 0.05), ConfigError);
  CHECK_THROWS_AS(
      entropy_correction_debye(PlateConfiguration(debye_plate(110.0, a, 0.1), debye_plate(50.0, a, 0.1), a, T), 0.05),
      ConfigError);
}

TEST_CASE("Debye low-temperature free energy", "[mu]") {
  const double a = 5e-6;
  const double T = temperature_for(a, 50.0);
  // Vanishing ae reduces to the first-order low-temperature asymptote.
  const PlateConfiguration stiff(debye_plate(110.0, a, 1e-14), debye_plate(110.0, a, 1e-14), a, T);
  const double L = dimensionless_state(stiff).Lambda;
  const DimensionlessState s = dimensionless_state(stiff);
  const double t3 = s.t * s.t * s.t;
  const double first_order = -hbar_c / (8.0 * pi * a * a * a) *
                             (zeta(3) / (2.0 * t3) - pi * pi * pi / (90.0 * t3 * s.t) +
                              L * (zeta(3) / t3 - 2.0 * pi * pi * pi / (45.0 * t3 * s.t)));
  CHECK_THAT(low_T_free_energy_debye(stiff, L), WithinRel(first_order, 1e-12));
  CHECK_THROWS_AS(low_T_free_energy_debye(stiff.at_temperature(temperature_for(a, 5.0)), L), ValidityError);
}

TEST_CASE("Debye dispersion term against the Abel-Plana difference", "[mu]") {
  // mu0 = 4 and small Lambda separate the dispersion coefficient from forms differing by sqrt(mu0)/pi^2.
  const double a = 5e-6;
  const double ae = 0.002;
  const MaterialModel m = debye_plate(4.0, a, ae, 0.01 * 2.0 * pi * 40e-9);
  const PlateConfiguration cfg(m, m, a, temperature_for(a, 50.0));
  NumericOptions opt;
  opt.tol = 1e-12;
  opt.mu_mode = PermeabilityMode::debye;
  const double with_dispersion = thermal_correction_abel_plana(cfg, opt);
  opt.mu_mode = PermeabilityMode::static_mu;
  const double without = thermal_correction_abel_plana(cfg, opt);
  const double term = debye_free_energy_term(cfg, dimensionless_state(cfg).Lambda);
  CHECK(term > 0.0);
  CHECK_THAT(with_dispersion - without, WithinRel(term, 0.01));
}

TEST_CASE("small-zeta integral identity", "[mu][property]") {
  boost::math::quadrature::exp_sinh<double> rule;
  for (double z : {1e-4, 1e-3, 1e-2}) {
    const double v = rule.integrate([&](double s) {
      const double y = z + s;
      return (z * z + y * y) / std::expm1(y);
    }, 1e-13);
    INFO("zeta = " << z);
    CHECK(std::abs(v - 2.0 * zeta(3)) <= z);
  }
}
