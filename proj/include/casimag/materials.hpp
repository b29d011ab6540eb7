#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>

#include "constants.hpp"
#include "error.hpp"

namespace casimag {

/// Relaxation laws for the Drude permittivity.
struct NoRelaxation {};
struct PerfectLattice {
  double gamma0;  // rad / (s K^2)
};
struct ConstantRelaxation {
  double gamma;  // rad / s
};
using RelaxationLaw = std::variant<NoRelaxation, PerfectLattice, ConstantRelaxation>;

/// Frequency dependence of the magnetic permeability.
struct ConstantPermeability {};
struct DebyePermeability {
  double omega_m;  // rad / s
};
using PermeabilityDispersion = std::variant<ConstantPermeability, DebyePermeability>;

/// One plate material; immutable after construction.
class MaterialModel {
 public:
  MaterialModel(std::string name, double plasma_frequency, RelaxationLaw relaxation, double mu0,
                PermeabilityDispersion dispersion)
      : name_(std::move(name)),
        omega_p_(plasma_frequency),
        relaxation_(relaxation),
        mu0_(mu0),
        dispersion_(dispersion) {
    if (!(omega_p_ > 0.0) || !std::isfinite(omega_p_)) throw ConfigError(name_ + ": plasma frequency must be positive");
    if (!(mu0_ >= 1.0) || !std::isfinite(mu0_)) throw ConfigError(name_ + ": mu0 must be >= 1");
    if (const auto* p = std::get_if<PerfectLattice>(&relaxation_); p && !(p->gamma0 >= 0.0))
      throw ConfigError(name_ + ": gamma0 must be >= 0");
    if (const auto* p = std::get_if<ConstantRelaxation>(&relaxation_); p && !(p->gamma >= 0.0))
      throw ConfigError(name_ + ": gamma must be >= 0");
    if (const auto* p = std::get_if<DebyePermeability>(&dispersion_); p && !(p->omega_m > 0.0))
      throw ConfigError(name_ + ": omega_m must be positive");
  }

  /// Material specified by its plasma wavelength in metres.
  static MaterialModel from_wavelength(std::string name, double lambda_p, RelaxationLaw relaxation, double mu0,
                                       PermeabilityDispersion dispersion = ConstantPermeability{}) {
    if (!(lambda_p > 0.0)) throw ConfigError(name + ": plasma wavelength must be positive");
    return {std::move(name), 2.0 * constants::pi * constants::c / lambda_p, relaxation, mu0, dispersion};
  }

  const std::string& name() const { return name_; }
  double plasma_frequency() const { return omega_p_; }
  double plasma_wavelength() const { return 2.0 * constants::pi * constants::c / omega_p_; }
  const RelaxationLaw& relaxation() const { return relaxation_; }
  double mu0() const { return mu0_; }
  const PermeabilityDispersion& dispersion() const { return dispersion_; }
  bool has_relaxation() const { return !std::holds_alternative<NoRelaxation>(relaxation_); }
  bool is_debye() const { return std::holds_alternative<DebyePermeability>(dispersion_); }

  MaterialModel with_dispersion(PermeabilityDispersion d) const {
    return {name_, omega_p_, relaxation_, mu0_, d};
  }
  MaterialModel with_relaxation(RelaxationLaw r) const { return {name_, omega_p_, r, mu0_, dispersion_}; }

 private:
  std::string name_;
  double omega_p_;
  RelaxationLaw relaxation_;
  double mu0_;
  PermeabilityDispersion dispersion_;
};

/// gamma(T) in rad/s.
inline double relaxation_frequency(const MaterialModel& m, double T) {
  if (!(T >= 0.0)) throw ConfigError("relaxation_frequency: temperature must be >= 0");
  return std::visit(
      [T](const auto& law) -> double {
        using L = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<L, PerfectLattice>)
          return law.gamma0 * T * T;
        else if constexpr (std::is_same_v<L, ConstantRelaxation>)
          return law.gamma;
        else
          return 0.0;
      },
      m.relaxation());
}

inline double epsilon_plasma(const MaterialModel& m, double zeta, double omega_c) {
  if (!(zeta > 0.0)) throw ConfigError("epsilon_plasma: zeta must be positive");
  const double w = m.plasma_frequency() / omega_c / zeta;
  return 1.0 + w * w;
}

inline double epsilon_drude(const MaterialModel& m, double zeta, double omega_c, double T) {
  if (!(zeta > 0.0)) throw ConfigError("epsilon_drude: zeta must be positive");
  if (!m.has_relaxation()) throw ConfigError("epsilon_drude: material " + m.name() + " has no relaxation law");
  const double wp = m.plasma_frequency() / omega_c;
  const double g = relaxation_frequency(m, T) / omega_c;
  return 1.0 + wp * wp / (zeta * (zeta + g));
}

inline double mu_at_frequency(const MaterialModel& m, double zeta, double omega_c) {
  if (!(zeta >= 0.0)) throw ConfigError("mu_at_frequency: zeta must be >= 0");
  if (const auto* d = std::get_if<DebyePermeability>(&m.dispersion())) {
    if (std::isinf(zeta)) return 1.0;
    return 1.0 + (m.mu0() - 1.0) / (1.0 + omega_c / d->omega_m * zeta);
  }
  return m.mu0();
}

/// Two plates at separation a (m) and temperature T (K).
class PlateConfiguration {
 public:
  PlateConfiguration(MaterialModel first, MaterialModel second, double separation, double temperature)
      : plates_{std::move(first), std::move(second)}, a_(separation), T_(temperature) {
    if (!(a_ > 0.0) || !std::isfinite(a_)) throw ConfigError("separation must be positive");
    if (!(T_ >= 0.0) || !std::isfinite(T_)) throw ConfigError("temperature must be >= 0");
  }

  const MaterialModel& plate(int n) const { return plates_.at(n); }
  const std::array<MaterialModel, 2>& plates() const { return plates_; }
  double separation() const { return a_; }
  double temperature() const { return T_; }

  PlateConfiguration at(double separation, double temperature) const {
    return {plates_[0], plates_[1], separation, temperature};
  }
  PlateConfiguration at_temperature(double temperature) const { return at(a_, temperature); }
  PlateConfiguration at_separation(double separation) const { return at(separation, T_); }

 private:
  std::array<MaterialModel, 2> plates_;
  double a_;
  double T_;
};

/// Dimensionless parameters of a configuration.
struct DimensionlessState {
  double omega_c = 0.0;  // c / 2a, rad/s
  double t = 0.0;        // hbar c / (2 a k_B T); infinite at T = 0
  double tau = 0.0;      // 2 pi / t
  std::array<double, 2> beta{};        // lambda_p / (4 pi a)
  std::array<double, 2> wp_tilde{};    // omega_p / omega_c
  std::array<double, 2> gamma_tilde{}; // gamma(T) / omega_c
  std::array<double, 2> ae_m{};        // omega_c / omega_m, zero for constant permeability
  std::array<double, 2> mu0{};
  double Lambda = 0.0;
  double Lambda1 = 0.0;

  double zeta(long l) const { return static_cast<double>(l) * tau; }
};

inline DimensionlessState dimensionless_state(const PlateConfiguration& cfg) {
  using namespace constants;
  DimensionlessState s;
  const double a = cfg.separation();
  const double T = cfg.temperature();
  s.omega_c = c / (2.0 * a);
  if (T > 0.0) {
    s.t = hbar * c / (2.0 * a * k_B * T);
    s.tau = 2.0 * pi / s.t;
  } else {
    s.t = std::numeric_limits<double>::infinity();
    s.tau = 0.0;
  }
  for (int n = 0; n < 2; ++n) {
    const MaterialModel& m = cfg.plate(n);
    s.beta[n] = m.plasma_wavelength() / (4.0 * pi * a);
    s.wp_tilde[n] = m.plasma_frequency() / s.omega_c;
    s.gamma_tilde[n] = relaxation_frequency(m, T) / s.omega_c;
    s.mu0[n] = m.mu0();
    if (const auto* d = std::get_if<DebyePermeability>(&m.dispersion())) s.ae_m[n] = s.omega_c / d->omega_m;
    s.Lambda += std::sqrt(m.mu0()) * s.beta[n];
    s.Lambda1 += s.beta[n];
  }
  return s;
}

/// Ni-like preset with mu0 = 110 and lambda_p = 2 pi * 40 nm; relaxation and dispersion are caller-supplied.
inline MaterialModel nickel(RelaxationLaw relaxation = NoRelaxation{},
                            PermeabilityDispersion dispersion = ConstantPermeability{}) {
  return MaterialModel::from_wavelength("Ni", 2.0 * constants::pi * 40e-9, relaxation, 110.0, dispersion);
}

}  // namespace casimag
