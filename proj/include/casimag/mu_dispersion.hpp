#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <variant>

#include "constants.hpp"
#include "dual.hpp"
#include "error.hpp"
#include "materials.hpp"
#include "perturbation_plasma.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"
#include "validity.hpp"

namespace casimag {

/// Default lower temperature for treating mu = 1 at all nonzero Matsubara frequencies, K.
inline constexpr double static_mu_default_min_temperature = 1e-3;

namespace detail {

inline void require_static_mu_regime(const PlateConfiguration& cfg, double Lambda, double min_temperature,
                                     const char* what) {
  require_perturbative(Lambda, what);
  check_gate(cfg.temperature() > min_temperature, std::string(what) + ": temperature below the static-permeability guard");
  check_gate(dimensionless_state(cfg).t > series_min_t, std::string(what) + ": needs t > 0.5");
}

// Thermal correction with mu = 1 for l >= 1 and mu0 kept at l = 0, as a function of a.
// Lambda and Lambda1 scale as 1/a.
template <class T>
T static_mu_zero_only_at(T a, const PlateConfiguration& cfg, double Lambda, double Lambda1) {
  using namespace constants;
  const double a0 = cfg.separation();
  const T L = Lambda * a0 / a;
  const T L1 = Lambda1 * a0 / a;
  const T t = hbar * c / (2.0 * k_B * cfg.temperature()) / a;
  const T series = hbar * c / (16.0 * pi * pi * a * a * a) * b_series(t, L1).value;
  const T zero = k_B * cfg.temperature() * zeta(3) / (4.0 * pi * a * a) * (L - L1) * (1.0 - 3.0 * (L + L1));
  return series + zero;
}

}  // namespace detail

/// Zero-frequency TE contribution of the static permeability, to second order in Lambda, Lambda1; J/m^2.
inline double static_mu_zero_frequency_term(const PlateConfiguration& cfg, double Lambda, double Lambda1) {
  const double a = cfg.separation();
  return constants::k_B * cfg.temperature() * zeta(3) / (4.0 * constants::pi * a * a) * (Lambda - Lambda1) *
         (1.0 - 3.0 * (Lambda + Lambda1));
}

/// The same contribution from its two zero-frequency y-integrals without expansion; J/m^2.
inline double static_mu_zero_frequency_term_exact(const PlateConfiguration& cfg, double rel_tol = 1e-12) {
  const DimensionlessState s = dimensionless_state(cfg);
  // Plasma TE coefficient written as -(1 - e) with e = 2 mu y / (mu y + sqrt(mu wp^2 + y^2)).
  auto log_term = [&](double y, bool magnetic) {
    double e[2];
    for (int n = 0; n < 2; ++n) {
      const double mu = magnetic ? s.mu0[n] : 1.0;
      e[n] = 2.0 * mu * y / (mu * y + std::sqrt(mu * s.wp_tilde[n] * s.wp_tilde[n] + y * y));
    }
    const double product = (1.0 - e[0]) * (1.0 - e[1]);
    if (y > 0.5) return std::log1p(-product * std::exp(-y));
    return std::log((e[0] + e[1] - e[0] * e[1]) - product * std::expm1(-y));
  };
  const QuadratureResult q = integrate_to_infinity(
      [&](double y) {
        if (y > 740.0 || y == 0.0) return 0.0;
        return y * (log_term(y, true) - log_term(y, false));
      },
      0.0, rel_tol, "static-permeability zero-frequency term");
  const double a = cfg.separation();
  return constants::k_B * cfg.temperature() / (16.0 * constants::pi * a * a) * q.value;
}

/// Thermal correction with mu(i xi_l) = 1 for l >= 1 and mu0 at l = 0; J/m^2.
inline double thermal_correction_static_mu_zero_only(const PlateConfiguration& cfg, double Lambda, double Lambda1,
                                                     double min_temperature = static_mu_default_min_temperature) {
  detail::require_static_mu_regime(cfg, Lambda, min_temperature, "thermal_correction_static_mu_zero_only");
  return detail::static_mu_zero_only_at(cfg.separation(), cfg, Lambda, Lambda1);
}

/// Thermal correction to the pressure, -d/da of the static-mu thermal correction at fixed T; Pa.
/// Evaluated exactly in a with forward-mode differentiation.
inline double pressure_correction(const PlateConfiguration& cfg, double Lambda, double Lambda1,
                                  double min_temperature = static_mu_default_min_temperature) {
  detail::require_static_mu_regime(cfg, Lambda, min_temperature, "pressure_correction");
  return -detail::static_mu_zero_only_at(Dual::variable(cfg.separation()), cfg, Lambda, Lambda1).d;
}

namespace detail {

// Checks the two-similar-plates, Debye-dispersion precondition and returns (mu0, ae_m).
inline std::pair<double, double> similar_debye_plates(const PlateConfiguration& cfg, const char* what) {
  const MaterialModel& m1 = cfg.plate(0);
  const MaterialModel& m2 = cfg.plate(1);
  const auto* d1 = std::get_if<DebyePermeability>(&m1.dispersion());
  const auto* d2 = std::get_if<DebyePermeability>(&m2.dispersion());
  if (!d1 || !d2) throw ConfigError(std::string(what) + ": both plates need Debye permeability");
  if (m1.plasma_frequency() != m2.plasma_frequency() || m1.mu0() != m2.mu0() || d1->omega_m != d2->omega_m)
    throw ConfigError(std::string(what) + ": only similar plates are supported");
  return {m1.mu0(), dimensionless_state(cfg).ae_m[0]};
}

}  // namespace detail

/// Free-energy term from Debye dispersion of mu, first order in Lambda; J/m^2.
inline double debye_free_energy_term(const PlateConfiguration& cfg, double Lambda) {
  const auto [mu0, ae] = detail::similar_debye_plates(cfg, "debye_free_energy_term");
  const DimensionlessState s = dimensionless_state(cfg);
  const double a = cfg.separation();
  return constants::hbar * constants::c * zeta(3) * (mu0 - 1.0) * ae * Lambda / (48.0 * mu0 * a * a * a * s.t * s.t);
}

/// Low-temperature thermal correction with Debye permeability, first order in Lambda; J/m^2.
inline double low_T_free_energy_debye(const PlateConfiguration& cfg, double Lambda) {
  detail::similar_debye_plates(cfg, "low_T_free_energy_debye");
  require_perturbative(Lambda, "low_T_free_energy_debye");
  const DimensionlessState s = dimensionless_state(cfg);
  check_gate(s.t > low_t_min_t, "low_T_free_energy_debye: asymptote needs t > 10");
  const double a = cfg.separation();
  const double t3 = s.t * s.t * s.t;
  const double t4 = t3 * s.t;
  constexpr double pi = std::numbers::pi;
  const double bracket =
      zeta(3) / (2.0 * t3) - pi * pi * pi / (90.0 * t4) + Lambda * (zeta(3) / t3 - 2.0 * pi * pi * pi / (45.0 * t4));
  return -constants::hbar * constants::c / (8.0 * pi * a * a * a) * bracket + debye_free_energy_term(cfg, Lambda);
}

/// Entropy correction from Debye dispersion of mu; J/(K m^2). Linear in tau.
inline double entropy_correction_debye(const PlateConfiguration& cfg, double Lambda) {
  const auto [mu0, ae] = detail::similar_debye_plates(cfg, "entropy_correction_debye");
  require_perturbative(Lambda, "entropy_correction_debye");
  const DimensionlessState s = dimensionless_state(cfg);
  check_gate(s.t > low_t_min_t, "entropy_correction_debye: asymptote needs t > 10");
  const double a = cfg.separation();
  return -constants::k_B * zeta(3) * (mu0 - 1.0) * ae * Lambda * s.tau / (24.0 * constants::pi * mu0 * a * a);
}

struct DispersionCorrection {
  double free_energy_correction = 0.0;  // J/m^2
  double entropy_correction = 0.0;      // J/(K m^2)
};

inline DispersionCorrection dispersion_correction(const PlateConfiguration& cfg, double Lambda) {
  return {debye_free_energy_term(cfg, Lambda), entropy_correction_debye(cfg, Lambda)};
}

}  // namespace casimag
