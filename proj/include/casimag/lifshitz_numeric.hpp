#pragma once

#include <boost/math/tools/toms748_solve.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "constants.hpp"
#include "error.hpp"
#include "materials.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace casimag {

enum class Permittivity { plasma, drude };

/// How the permeability enters: static mu0 everywhere, Debye dispersion for
/// materials that declare it, or mu0 only in the zero-frequency term.
enum class PermeabilityMode { static_mu, debye, static_zero_term_only };

enum class Representation { matsubara, abel_plana };

inline const char* to_string(Permittivity m) { return m == Permittivity::plasma ? "plasma" : "drude"; }
inline const char* to_string(Representation r) { return r == Representation::matsubara ? "matsubara" : "abel_plana"; }
inline const char* to_string(PermeabilityMode m) {
  switch (m) {
    case PermeabilityMode::static_mu: return "static";
    case PermeabilityMode::debye: return "debye";
    case PermeabilityMode::static_zero_term_only: return "static-zero-term-only";
  }
  return "?";
}

struct NumericOptions {
  double tol = 1e-10;
  long l_max = 4'000'000;
  PermeabilityMode mu_mode = PermeabilityMode::static_mu;
  unsigned threads = 0;  // 0: CASIMIR_MAG_THREADS or hardware concurrency
  bool split_zero_temperature = true;  // also compute E(a) and the thermal correction
};

struct ReflectionPair {
  double tm = 0.0;
  double te = 0.0;
};

/// Reflection coefficients at imaginary frequency zeta and y >= zeta.
inline ReflectionPair reflection_coefficients(double eps, double mu, double zeta, double y) {
  if (!(y > 0.0) || !(zeta >= 0.0)) throw ConfigError("reflection_coefficients: need y > 0 and zeta >= 0");
  if (y < zeta) throw ConfigError("reflection_coefficients: y < zeta is outside the integration domain");
  if (!(eps >= 1.0) || !(mu >= 1.0)) throw ConfigError("reflection_coefficients: need eps >= 1 and mu >= 1");
  if (std::isinf(eps)) return {1.0, -1.0};
  const double S = std::sqrt(y * y + (eps * mu - 1.0) * zeta * zeta);
  return {(eps * y - S) / (eps * y + S), (mu * y - S) / (mu * y + S)};
}

/// Zero-frequency reflection coefficients; wp_tilde is omega_p / omega_c.
inline ReflectionPair zero_frequency_coefficients(const MaterialModel& m, Permittivity model, double wp_tilde,
                                                  double y) {
  if (!(y > 0.0)) throw ConfigError("zero_frequency_coefficients: need y > 0");
  const double mu = m.mu0();
  if (model == Permittivity::drude) return {1.0, (mu - 1.0) / (mu + 1.0)};
  const double root = std::sqrt(mu * wp_tilde * wp_tilde + y * y);
  return {1.0, (mu * y - root) / (mu * y + root)};
}

namespace detail {

inline double expm1(double x) { return std::expm1(x); }
inline std::complex<double> expm1(std::complex<double> z) {
  if (std::abs(z) > 1e-2) return std::exp(z) - 1.0;
  std::complex<double> term = z;
  std::complex<double> sum = z;
  for (int k = 2; k < 8; ++k) {
    term *= z / static_cast<double>(k);
    sum += term;
  }
  return sum;
}
inline double log1p(double x) { return std::log1p(x); }
inline std::complex<double> log1p(std::complex<double> z) {
  if (std::abs(z) > 1e-3) return std::log(1.0 + z);
  std::complex<double> power = z;
  std::complex<double> sum = z;
  for (int k = 2; k < 7; ++k) {
    power *= -z;
    sum += power / static_cast<double>(k);
  }
  return sum;
}
inline double real_part(double x) { return x; }
inline double real_part(std::complex<double> x) { return x.real(); }

}  // namespace detail

/// The Lifshitz integrand F(zeta, y) = sum over polarizations of ln(1 - r1 r2 e^{-y}),
/// templated so the same code runs on the real axis and along the Abel-Plana contour.
class LifshitzIntegrand {
 public:
  struct Plate {
    double wp = 0.0;     // omega_p / omega_c
    double gamma = 0.0;  // gamma / omega_c, zero for the plasma model
    double mu0 = 1.0;
    double ae = 0.0;     // omega_c / omega_m for Debye dispersion, else 0
    bool unit_mu_at_nonzero = false;
  };

  LifshitzIntegrand(const DimensionlessState& s, const PlateConfiguration& cfg, Permittivity model,
                    PermeabilityMode mode)
      : model_(model) {
    for (int n = 0; n < 2; ++n) {
      Plate& p = plates_[n];
      p.wp = s.wp_tilde[n];
      p.mu0 = s.mu0[n];
      if (model == Permittivity::drude) {
        if (!cfg.plate(n).has_relaxation())
          throw ConfigError("drude model requires a relaxation law for material " + cfg.plate(n).name());
        p.gamma = s.gamma_tilde[n];
      }
      if (mode == PermeabilityMode::debye) p.ae = s.ae_m[n];
      p.unit_mu_at_nonzero = (mode == PermeabilityMode::static_zero_term_only);
    }
  }

  const std::array<Plate, 2>& plates() const { return plates_; }
  Permittivity model() const { return model_; }

  template <class T>
  T mu(int n, T zeta) const {
    const Plate& p = plates_[n];
    if (p.unit_mu_at_nonzero) return T(1.0);
    if (p.ae > 0.0) return 1.0 + (p.mu0 - 1.0) / (1.0 + p.ae * zeta);
    return T(p.mu0);
  }

  /// A reflection coefficient r = (A - B)/(A + B) stored as 1 - r and 1 + r to keep products near
  /// |r1 r2| = 1 accurate.
  template <class T>
  struct Reflection {
    T one_minus;
    T one_plus;
    T value() const { return 0.5 * (one_plus - one_minus); }
    static Reflection of(T A, T B) {
      const T den = A + B;
      return {2.0 * B / den, 2.0 * A / den};
    }
  };

  /// TM and TE reflection coefficients of plate n at nonzero frequency.
  template <class T>
  std::pair<Reflection<T>, Reflection<T>> reflection(int n, T zeta, T y) const {
    const Plate& p = plates_[n];
    const T z2 = zeta * zeta;
    const T m = mu(n, zeta);
    // (eps - 1) zeta^2
    const T e2m = (p.gamma > 0.0) ? T(p.wp * p.wp) * zeta / (zeta + p.gamma) : T(p.wp * p.wp);
    const T e2 = z2 + e2m;
    const T S = std::sqrt(y * y + (m - 1.0) * z2 + m * e2m);
    return {Reflection<T>::of(e2 * y, z2 * S), Reflection<T>::of(m * y, S)};
  }

  /// ln(1 - r1 r2 e^{-y}). For small y the argument is formed as (1 - r1 r2) - r1 r2 expm1(-y),
  /// which stays accurate when r1 r2 e^{-y} is close to 1.
  template <class T>
  static T log_factor(const Reflection<T>& a, const Reflection<T>& b, T y) {
    const T product = a.value() * b.value();
    if (detail::real_part(y) > 0.5) return detail::log1p(-product * std::exp(-y));
    const T one_minus_product = 0.5 * (a.one_minus * b.one_plus + b.one_minus * a.one_plus);
    return std::log(one_minus_product - product * detail::expm1(-y));
  }

  /// F(zeta, y) for zeta != 0.
  template <class T>
  T log_term(T zeta, T y) const {
    if (detail::real_part(y) > 740.0) return T(0.0);
    const auto [tm1, te1] = reflection(0, zeta, y);
    const auto [tm2, te2] = reflection(1, zeta, y);
    return log_factor(tm1, tm2, y) + log_factor(te1, te2, y);
  }

  double zero_frequency_te(int n, double y) const {
    const Plate& p = plates_[n];
    if (model_ == Permittivity::drude) return (p.mu0 - 1.0) / (p.mu0 + 1.0);
    const double root = std::sqrt(p.mu0 * p.wp * p.wp + y * y);
    return (p.mu0 * y - root) / (p.mu0 * y + root);
  }

  /// F(0, y) with the zero-frequency coefficients; 1 - r e^{-y} is formed as (1 - r) - r expm1(-y).
  double zero_frequency_log_term(double y) const {
    if (y > 740.0) return 0.0;
    const double te = zero_frequency_te(0, y) * zero_frequency_te(1, y);
    if (y > 0.5) return std::log1p(-std::exp(-y)) + std::log1p(-te * std::exp(-y));
    const double em1 = std::expm1(-y);
    return std::log(-em1) + std::log((1.0 - te) - te * em1);
  }

 private:
  Permittivity model_;
  std::array<Plate, 2> plates_{};
};

/// Phi(zeta) = int_zeta^inf y F(zeta, y) dy on the real axis; zeta = 0 uses the zero-frequency coefficients.
inline QuadratureResult phi_real(const LifshitzIntegrand& f, double zeta, double rel_tol) {
  if (zeta == 0.0)
    return integrate_to_infinity([&](double y) { return y * f.zero_frequency_log_term(y); }, 0.0, rel_tol,
                                 "zero-frequency term");
  return integrate_to_infinity([&](double s) { return (zeta + s) * f.log_term(zeta, zeta + s); }, 0.0, rel_tol,
                               "Matsubara term");
}

/// Im Phi(i x) along the ray y = i x + s, s >= 0.
inline QuadratureResult phi_imaginary_axis(const LifshitzIntegrand& f, double x, double rel_tol) {
  using cd = std::complex<double>;
  const cd zeta(0.0, x);
  return integrate_to_infinity(
      [&](double s) {
        const cd y(s, x);
        return (y * f.log_term(zeta, y)).imag();
      },
      0.0, rel_tol, "Abel-Plana contour");
}

struct FreeEnergyResult {
  double total = 0.0;               // J/m^2
  double zero_t_part = 0.0;         // J/m^2
  double thermal_correction = 0.0;  // J/m^2
  long terms_used = 0;
  double truncation_error_estimate = 0.0;  // J/m^2
  Representation representation = Representation::matsubara;
  std::vector<double> terms;  // J/m^2, l = 0 term already halved
};

/// Zero-temperature energy E(a) in J/m^2 from the zeta-integral of the Poisson l = 0 term.
/// Material parameters are taken at T = 0.
inline double zero_temperature_energy(const PlateConfiguration& cfg, Permittivity model,
                                      const NumericOptions& opt = {}) {
  const PlateConfiguration cold = cfg.at_temperature(0.0);
  const DimensionlessState s = dimensionless_state(cold);
  // A perfect-lattice Drude metal at T = 0 has gamma = 0; the zeta > 0 integrand is then the plasma one.
  const LifshitzIntegrand f(s, cold, model, opt.mu_mode);
  const double inner_tol = opt.tol / 100.0;
  const QuadratureResult r = integrate_to_infinity(
      [&](double zeta) { return zeta > 0.0 ? phi_real(f, zeta, inner_tol).value : 0.0; }, 0.0, opt.tol / 10.0,
      "zero-temperature energy");
  const double a = cfg.separation();
  return constants::hbar * constants::c / (32.0 * constants::pi * constants::pi * a * a * a) * r.value;
}

/// Primed Matsubara sum of the Lifshitz free energy.
inline FreeEnergyResult free_energy_matsubara(const PlateConfiguration& cfg, Permittivity model,
                                              const NumericOptions& opt = {}) {
  if (!(cfg.temperature() > 0.0)) throw ConfigError("free_energy_matsubara: temperature must be positive");
  if (!(opt.tol > 0.0)) throw ConfigError("free_energy_matsubara: tolerance must be positive");
  const DimensionlessState s = dimensionless_state(cfg);
  const LifshitzIntegrand f(s, cfg, model, opt.mu_mode);
  const double a = cfg.separation();
  const double prefactor = constants::k_B * cfg.temperature() / (8.0 * constants::pi * a * a);
  const double quad_tol = opt.tol / 10.0;
  const unsigned threads = resolve_thread_count(opt.threads);

  FreeEnergyResult res;
  double sum = 0.0;
  int small_run = 0;
  long l = 0;
  const std::size_t block = threads > 1 ? 16 * threads : 16;
  std::vector<double> buffer;
  bool done = false;
  while (!done) {
    if (l > opt.l_max)
      throw ConvergenceError("Matsubara sum did not converge within l_max = " + std::to_string(opt.l_max));
    const std::size_t count = static_cast<std::size_t>(std::min<long>(block, opt.l_max - l + 1));
    buffer.assign(count, 0.0);
    parallel_for(count, threads, [&](std::size_t i) {
      const long li = l + static_cast<long>(i);
      const double v = prefactor * phi_real(f, s.zeta(li), quad_tol).value;
      buffer[i] = (li == 0) ? 0.5 * v : v;
    });
    for (std::size_t i = 0; i < count; ++i, ++l) {
      const double term = buffer[i];
      res.terms.push_back(term);
      sum += term;
      if (l == 0) continue;
      small_run = (std::abs(term) < opt.tol * std::abs(sum)) ? small_run + 1 : 0;
      double tail = std::abs(term);
      const double prev = res.terms[res.terms.size() - 2];
      if (l >= 2 && prev != 0.0) {
        const double q = std::abs(term / prev);
        tail = q < 1.0 ? std::abs(term) * q / (1.0 - q) : std::numeric_limits<double>::infinity();
      }
      if ((small_run >= 3 && tail < opt.tol * std::abs(sum)) || term == 0.0) {
        res.truncation_error_estimate = std::max(tail, std::abs(term));
        ++l;
        done = true;
        break;
      }
    }
  }
  res.terms_used = static_cast<long>(res.terms.size());
  res.total = sum;
  if (opt.split_zero_temperature) {
    res.zero_t_part = zero_temperature_energy(cfg, model, opt);
    res.thermal_correction = res.total - res.zero_t_part;
  } else {
    res.zero_t_part = res.thermal_correction = std::numeric_limits<double>::quiet_NaN();
  }
  res.representation = Representation::matsubara;
  return res;
}

namespace detail {

// Points on the imaginary axis where r1 r2 e^{-ix} reaches 1 at s = 0 (log singularity of the
// contour integrand) together with the plasma edges x = omega_p / omega_c.
inline std::vector<double> contour_breakpoints(const LifshitzIntegrand& f, double x_max) {
  using cd = std::complex<double>;
  std::vector<double> points;
  auto products = [&](double x) {
    const cd zeta(0.0, x);
    const auto [tm1, te1] = f.reflection(0, zeta, zeta);
    const auto [tm2, te2] = f.reflection(1, zeta, zeta);
    const cd e = std::exp(-zeta);
    return std::array<cd, 2>{tm1.value() * tm2.value() * e, te1.value() * te2.value() * e};
  };
  for (const auto& p : f.plates())
    if (p.wp < x_max) points.push_back(p.wp);
  const double step = 0.05;
  std::array<cd, 2> prev = products(step * 1e-3);
  double x_prev = step * 1e-3;
  for (double x = step; x < x_max; x += step) {
    const std::array<cd, 2> cur = products(x);
    for (int k = 0; k < 2; ++k) {
      if (prev[k].imag() * cur[k].imag() < 0.0 && cur[k].real() > 0.0 && prev[k].real() > 0.0) {
        auto g = [&](double xx) { return products(xx)[k].imag(); };
        std::uintmax_t iters = 100;
        const auto root = boost::math::tools::toms748_solve(g, x_prev, x, boost::math::tools::eps_tolerance<double>(50),
                                                            iters);
        points.push_back(0.5 * (root.first + root.second));
      }
    }
    prev = cur;
    x_prev = x;
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end(),
                           [](double u, double v) { return std::abs(u - v) < 1e-12 * std::max(1.0, v); }),
               points.end());
  return points;
}

}  // namespace detail

/// Thermal correction by the Abel-Plana formula, in J/m^2.
inline double thermal_correction_abel_plana(const PlateConfiguration& cfg, const NumericOptions& opt = {}) {
  if (!(cfg.temperature() > 0.0)) throw ConfigError("free_energy_abel_plana: temperature must be positive");
  if (opt.mu_mode == PermeabilityMode::static_zero_term_only)
    throw ConfigError("Abel-Plana representation needs an analytic integrand; static-zero-term-only is not");
  const DimensionlessState s = dimensionless_state(cfg);
  const LifshitzIntegrand f(s, cfg, Permittivity::plasma, opt.mu_mode);
  const double tau = s.tau;
  const double inner_tol = opt.tol / 100.0;
  // Beyond t_cut the Bose weight is below tol * 1e-7; the remainder goes to the exp-sinh tail.
  const double t_cut = (16.0 - std::log(opt.tol)) / (2.0 * constants::pi);
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double weight = 1.0 / std::expm1(2.0 * constants::pi * t);
    if (weight == 0.0) return 0.0;
    return phi_imaginary_axis(f, tau * t, inner_tol).value * weight;
  };
  std::vector<double> edges{0.0};
  for (double x : detail::contour_breakpoints(f, tau * t_cut)) edges.push_back(x / tau);
  edges.push_back(t_cut);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    sum += integrate_interval(integrand, edges[k], edges[k + 1], opt.tol / 10.0, "Abel-Plana panel").value;
  sum += integrate_to_infinity(integrand, t_cut, opt.tol / 10.0, "Abel-Plana tail").value;
  const double a = cfg.separation();
  return -constants::hbar * constants::c * tau / (16.0 * constants::pi * constants::pi * a * a * a) * sum;
}

/// Plasma-model free energy as E(a) plus the Abel-Plana thermal correction.
inline FreeEnergyResult free_energy_abel_plana(const PlateConfiguration& cfg, const NumericOptions& opt = {}) {
  FreeEnergyResult res;
  res.representation = Representation::abel_plana;
  res.thermal_correction = thermal_correction_abel_plana(cfg, opt);
  res.zero_t_part = zero_temperature_energy(cfg, Permittivity::plasma, opt);
  res.total = res.zero_t_part + res.thermal_correction;
  return res;
}

struct FiniteDifference {
  double value = 0.0;
  double error_estimate = 0.0;
  double step = 0.0;
};

/// Central difference with one Richardson level: steps h and h/2; error is |D(h/2) - D(h)| / 3.
template <class F>
FiniteDifference richardson_derivative(F&& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return {d2 + (d2 - d1) / 3.0, std::abs(d2 - d1) / 3.0, h};
}

enum class EntropyMethod { analytic, central_difference };
inline const char* to_string(EntropyMethod m) {
  return m == EntropyMethod::analytic ? "analytic" : "central_difference";
}

struct EntropyResult {
  double S = 0.0;  // J/(K m^2)
  EntropyMethod method = EntropyMethod::central_difference;
  double step = 0.0;  // K
  double error_estimate = 0.0;
};

/// S = -dF/dT for an arbitrary free-energy function of temperature.
inline EntropyResult entropy_fd(const std::function<double(double)>& free_energy, double T, double dT) {
  if (!(dT > 0.0) || !(T - dT > 0.0)) throw ConfigError("entropy_fd: need 0 < dT < T");
  const FiniteDifference d = richardson_derivative(free_energy, T, dT);
  return {-d.value, EntropyMethod::central_difference, dT, d.error_estimate};
}

/// Entropy of the Lifshitz free energy; dT defaults to T/50.
inline EntropyResult entropy_fd(const PlateConfiguration& cfg, Permittivity model, double dT = 0.0,
                                const NumericOptions& opt = {}) {
  const double T = cfg.temperature();
  if (dT == 0.0) dT = T / 50.0;
  NumericOptions sum_only = opt;
  sum_only.split_zero_temperature = false;
  return entropy_fd(
      [&](double temp) { return free_energy_matsubara(cfg.at_temperature(temp), model, sum_only).total; }, T, dT);
}

struct PressureResult {
  double total = 0.0;               // Pa
  double zero_t_part = 0.0;         // Pa
  double thermal_correction = 0.0;  // Pa
  double error_estimate = 0.0;      // Pa
  double step = 0.0;                // m
};

/// P = -dF/da; da defaults to a/200.
inline PressureResult pressure_fd(const PlateConfiguration& cfg, Permittivity model, double da = 0.0,
                                  const NumericOptions& opt = {}) {
  const double a = cfg.separation();
  if (da == 0.0) da = a / 200.0;
  if (!(da > 0.0) || !(a - da > 0.0)) throw ConfigError("pressure_fd: need 0 < da < a");
  NumericOptions sum_only = opt;
  sum_only.split_zero_temperature = false;
  const FiniteDifference total = richardson_derivative(
      [&](double sep) { return free_energy_matsubara(cfg.at_separation(sep), model, sum_only).total; }, a, da);
  const FiniteDifference zero = richardson_derivative(
      [&](double sep) { return zero_temperature_energy(cfg.at_separation(sep), model, opt); }, a, da);
  PressureResult p;
  p.total = -total.value;
  p.zero_t_part = -zero.value;
  p.thermal_correction = p.total - p.zero_t_part;
  p.error_estimate = total.error_estimate + zero.error_estimate;
  p.step = da;
  return p;
}

}  // namespace casimag
