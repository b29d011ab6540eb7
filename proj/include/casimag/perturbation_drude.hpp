#pragma once

#include <cmath>
#include <numbers>

#include "constants.hpp"
#include "error.hpp"
#include "lifshitz_numeric.hpp"
#include "materials.hpp"
#include "perturbation_plasma.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"
#include "validity.hpp"

namespace casimag {

enum class Polarization { tm, te };

/// Zero-frequency Drude TE reflection coefficient.
inline double r_mu(double mu0) {
  if (!(mu0 >= 1.0)) throw ConfigError("r_mu: mu0 must be >= 1");
  return (mu0 - 1.0) / (mu0 + 1.0);
}

/// First-order relaxation coefficient R^(n)_alpha: the Drude product r1 r2 equals the plasma product
/// minus sum_n (gamma_n / zeta) R^(n). Plate index n is 0 or 1.
inline double expansion_coefficient_R(Polarization pol, int n, double zeta, double y, const DimensionlessState& s) {
  if (n < 0 || n > 1) throw ConfigError("expansion_coefficient_R: plate index must be 0 or 1");
  if (!(zeta > 0.0)) throw ConfigError("expansion_coefficient_R: zeta must be positive");
  if (y < zeta) throw ConfigError("expansion_coefficient_R: y < zeta is outside the integration domain");
  const double b = s.beta[n];
  const double mu = s.mu0[n];
  const double b2 = b * b;
  const double z2 = zeta * zeta;
  const double y2 = y * y;
  const double root = std::sqrt(b2 * y2 + b2 * z2 * (mu - 1.0) + mu);
  double product = 1.0;
  for (int k = 0; k < 2; ++k) {
    const double wp = s.wp_tilde[k];
    const double eps = 1.0 + wp * wp / z2;
    const ReflectionPair r = reflection_coefficients(eps, s.mu0[k], zeta, y);
    product *= (pol == Polarization::tm) ? r.tm : r.te;
  }
  if (pol == Polarization::tm) {
    // Denominator grouped as beta^2 zeta^2 {2 y^2 - zeta^2 [beta^2 zeta^2 (mu - 1) + mu]} + y^2;
    // the first-order consistency test against exact Drude products selects this reading.
    const double num = b * z2 * y * (mu + b2 * (z2 * mu + 2.0 * (y2 - z2)));
    const double den = b2 * z2 * (2.0 * y2 - z2 * (b2 * z2 * (mu - 1.0) + mu)) + y2;
    return num / root * product / den;
  }
  const double den = b2 * ((mu * mu - 1.0) * y2 - (mu - 1.0) * z2) - mu;
  return -b * mu * mu * y / root * product / den;
}

/// Zero-frequency term of the Drude-plasma difference through second order in Lambda, J/m^2.
inline double zero_frequency_term_F0(const PlateConfiguration& cfg, double Lambda) {
  require_perturbative(Lambda, "zero_frequency_term_F0");
  const double a = cfg.separation();
  const double z3 = zeta(3);
  const double li = polylog(3, r_mu(cfg.plate(0).mu0()) * r_mu(cfg.plate(1).mu0()));
  return constants::k_B * cfg.temperature() * z3 / (16.0 * constants::pi * a * a) *
         (1.0 - li / z3 - 4.0 * Lambda + 12.0 * Lambda * Lambda);
}

/// Same zero-frequency difference from its defining y-integrals (no expansion in Lambda), J/m^2.
inline double zero_frequency_term_F0_exact(const PlateConfiguration& cfg, double rel_tol = 1e-12) {
  const DimensionlessState s = dimensionless_state(cfg);
  const double r = r_mu(cfg.plate(0).mu0()) * r_mu(cfg.plate(1).mu0());
  // Plasma TE coefficient written as r_n = -(1 - e_n) so that 1 - r_1 r_2 = e_1 + e_2 - e_1 e_2 stays accurate.
  auto e_n = [&](int n, double y) {
    const double root = std::sqrt(s.mu0[n] * s.wp_tilde[n] * s.wp_tilde[n] + y * y);
    return 2.0 * s.mu0[n] * y / (s.mu0[n] * y + root);
  };
  const QuadratureResult q = integrate_to_infinity(
      [&](double y) {
        if (y > 740.0 || y == 0.0) return 0.0;
        const double e1 = e_n(0, y);
        const double e2 = e_n(1, y);
        const double product = (1.0 - e1) * (1.0 - e2);
        const double plasma = (y > 0.5) ? std::log1p(-product * std::exp(-y))
                                        : std::log((e1 + e2 - e1 * e2) - product * std::expm1(-y));
        return y * (std::log1p(-r * std::exp(-y)) - plasma);
      },
      0.0, rel_tol, "zero-frequency difference");
  const double a = cfg.separation();
  return constants::k_B * cfg.temperature() / (16.0 * constants::pi * a * a) * q.value;
}

/// sum_n sqrt(mu0_n) gamma_n(T) / omega_p_n.
inline double relaxation_weight(const PlateConfiguration& cfg, double T) {
  double g = 0.0;
  for (const MaterialModel& m : cfg.plates())
    g += std::sqrt(m.mu0()) * relaxation_frequency(m, T) / m.plasma_frequency();
  return g;
}

/// Constant of the small-tau relaxation term: 2 + zeta'(3)/zeta(3).
inline double f_gamma_constant() { return 2.0 + zeta_prime_3 / zeta(3); }

/// The tau-regime gate for the relaxation term.
inline constexpr double f_gamma_max_tau = 0.5;

/// Relaxation contribution of the nonzero Matsubara frequencies at small tau, J/m^2.
inline double relaxation_term_F_gamma(const PlateConfiguration& cfg) {
  for (const MaterialModel& m : cfg.plates())
    if (!m.has_relaxation()) throw ConfigError("relaxation_term_F_gamma: material " + m.name() + " has no relaxation law");
  const DimensionlessState s = dimensionless_state(cfg);
  if (!(cfg.temperature() > 0.0)) throw ConfigError("relaxation_term_F_gamma: temperature must be positive");
  check_gate(s.tau < f_gamma_max_tau, "relaxation_term_F_gamma: needs tau < 0.5");
  const double a = cfg.separation();
  const double kTeff = constants::hbar * constants::c / (2.0 * a);
  return kTeff * zeta(3) / (8.0 * constants::pi * constants::pi * a * a) * relaxation_weight(cfg, cfg.temperature()) *
         (-std::log(s.tau) + f_gamma_constant());
}

/// dF_gamma/dT, J/(K m^2). Differentiates gamma(T) (-ln tau + C) using d ln tau / dT = 1/T.
inline double f_gamma_derivative(const PlateConfiguration& cfg) {
  const double T = cfg.temperature();
  if (!(T > 0.0)) return 0.0;
  const DimensionlessState s = dimensionless_state(cfg);
  check_gate(s.tau < f_gamma_max_tau, "f_gamma_derivative: needs tau < 0.5");
  const double a = cfg.separation();
  const double kTeff = constants::hbar * constants::c / (2.0 * a);
  double g = 0.0;   // sum sqrt(mu0) gamma / omega_p
  double dg = 0.0;  // its temperature derivative
  for (const MaterialModel& m : cfg.plates()) {
    const double w = std::sqrt(m.mu0()) / m.plasma_frequency();
    if (const auto* p = std::get_if<PerfectLattice>(&m.relaxation())) {
      g += w * p->gamma0 * T * T;
      dg += w * 2.0 * p->gamma0 * T;
    } else if (const auto* c = std::get_if<ConstantRelaxation>(&m.relaxation())) {
      g += w * c->gamma;
    }
  }
  return kTeff * zeta(3) / (8.0 * constants::pi * constants::pi * a * a) *
         (dg * (-std::log(s.tau) + f_gamma_constant()) - g / T);
}

struct DrudeDecomposition {
  double F_p = 0.0;      // J/m^2
  double F_0 = 0.0;      // J/m^2
  double F_gamma = 0.0;  // J/m^2
  double total = 0.0;    // J/m^2
};

/// Drude free energy assembled as plasma free energy plus zero-frequency and relaxation terms.
inline DrudeDecomposition drude_free_energy(const PlateConfiguration& cfg, const NumericOptions& opt = {}) {
  const DimensionlessState s = dimensionless_state(cfg);
  require_perturbative(s.Lambda, "drude_free_energy");
  DrudeDecomposition d;
  d.F_p = zero_temperature_energy(cfg, Permittivity::plasma, opt) + thermal_correction_series(cfg, s.Lambda);
  d.F_0 = zero_frequency_term_F0(cfg, s.Lambda);
  d.F_gamma = relaxation_term_F_gamma(cfg);
  d.total = d.F_p + d.F_0 + d.F_gamma;
  return d;
}

/// Drude entropy at T = 0, J/(K m^2).
inline double entropy_at_zero_T(const PlateConfiguration& cfg, double Lambda) {
  require_perturbative(Lambda, "entropy_at_zero_T");
  const double a = cfg.separation();
  const double z3 = zeta(3);
  const double li = polylog(3, r_mu(cfg.plate(0).mu0()) * r_mu(cfg.plate(1).mu0()));
  return -constants::k_B * z3 / (16.0 * constants::pi * a * a) * (1.0 - li / z3 - 4.0 * Lambda + 12.0 * Lambda * Lambda);
}

/// Same limit from the unexpanded zero-frequency integrals, J/(K m^2).
inline double entropy_at_zero_T_exact(const PlateConfiguration& cfg) {
  const PlateConfiguration unit = cfg.at_temperature(1.0);
  return -zero_frequency_term_F0_exact(unit);
}

/// Separation below which similar plates have positive Drude entropy at T = 0, m.
inline double positivity_threshold(const MaterialModel& m) {
  if (!(m.mu0() > 1.0)) throw ConfigError("positivity_threshold: no threshold exists for mu0 = 1");
  const double pi3 = constants::pi * constants::pi * constants::pi;
  return 3.0 * m.plasma_wavelength() * std::pow(m.mu0(), 1.5) * zeta(3) / pi3;
}

}  // namespace casimag
