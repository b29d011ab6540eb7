#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "constants.hpp"
#include "diagnostics.hpp"
#include "error.hpp"
#include "lifshitz_numeric.hpp"
#include "material_config.hpp"
#include "materials.hpp"
#include "mu_dispersion.hpp"
#include "perturbation_drude.hpp"
#include "perturbation_plasma.hpp"
#include "validity.hpp"

#ifndef CASIMAG_GIT_DESCRIBE
#define CASIMAG_GIT_DESCRIBE "unknown"
#endif

namespace casimag::cli {

enum class Command { free_energy, entropy, pressure, nernst_scan, sign_map, validate };
enum class Format { csv, json };
enum class Method { numeric, analytic, abel_plana };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::free_energy: return "free-energy";
    case Command::entropy: return "entropy";
    case Command::pressure: return "pressure";
    case Command::nernst_scan: return "nernst-scan";
    case Command::sign_map: return "sign-map";
    default: return "validate";
  }
}
inline const char* to_string(Method m) {
  switch (m) {
    case Method::numeric: return "numeric";
    case Method::analytic: return "analytic";
    default: return "abel-plana";
  }
}

/// start:stop:linear|log:count, or a single value.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  bool log = false;
  int count = 1;

  std::vector<double> values() const {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      v.push_back(log ? start * std::pow(stop / start, f) : start + (stop - start) * f);
    }
    if (count > 1) v.back() = stop;
    return v;
  }

  std::string str() const {
    std::ostringstream os;
    os.precision(12);
    if (count == 1) {
      os << start;
    } else {
      os << start << ':' << stop << ':' << (log ? "log" : "linear") << ':' << count;
    }
    return os.str();
  }
};

inline double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double x = std::stod(text, &used);
    if (used == text.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError(what + ": not a number: '" + text + "'");
}

inline GridSpec parse_grid(const std::string& text, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  GridSpec g;
  if (parts.size() == 1) {
    g.start = g.stop = parse_number(parts[0], what);
  } else if (parts.size() == 4) {
    g.start = parse_number(parts[0], what);
    g.stop = parse_number(parts[1], what);
    if (parts[2] != "linear" && parts[2] != "log") throw ConfigError(what + ": spacing must be linear or log");
    g.log = parts[2] == "log";
    const double n = parse_number(parts[3], what);
    if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) throw ConfigError(what + ": count must be a positive integer");
    g.count = static_cast<int>(n);
  } else {
    throw ConfigError(what + ": expected a value or start:stop:linear|log:count");
  }
  if (!(g.start > 0.0) || !(g.stop > 0.0)) throw ConfigError(what + ": range must be positive");
  return g;
}

struct RunSpec {
  Command command = Command::free_energy;
  std::string material_path;
  std::string material_name;   // section; empty = first
  std::string material2_path;  // empty = same as first plate
  std::string material2_name;
  Permittivity model = Permittivity::plasma;
  PermeabilityMode mu_mode = PermeabilityMode::static_mu;
  Method method = Method::numeric;
  std::optional<GridSpec> a;  // m
  std::optional<GridSpec> T;  // K
  std::string grid;           // validate: "default" or empty for explicit ranges
  Format format = Format::csv;
  std::string output;  // empty = stdout
  double tol = 1e-10;
  long l_max = NumericOptions{}.l_max;
  double min_temperature = static_mu_default_min_temperature;
  unsigned threads = 0;
  bool force = false;
};

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += (ch == '"') ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline std::string render_csv(const Table& t) {
  std::ostringstream os;
  for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << '\n';
  for (const auto& [k, v] : t.summary) os << "# " << k << ": " << format_cell(v) << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(format_cell(row[i]));
    os << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* l = std::get_if<long>(&c)) return *l;
  return std::get<std::string>(c);
}

inline std::string render_json(const Table& t) {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) j["metadata"][k] = v;
  j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.summary) j["summary"][k] = cell_json(v);
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

/// Writes via a temporary file in the target directory and renames it into place.
inline void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot rename output into " + path);
  }
}

namespace detail {

inline std::string describe_material(const MaterialEntry& e) {
  const MaterialModel& m = e.model;
  std::ostringstream os;
  os.precision(12);
  os << m.name() << " omega_p_rad_s=" << m.plasma_frequency() << " lambda_p_m=" << m.plasma_wavelength()
     << " mu0=" << m.mu0();
  if (const auto* p = std::get_if<PerfectLattice>(&m.relaxation())) os << " relaxation=perfect_lattice gamma0_rad_s_K2=" << p->gamma0;
  else if (const auto* c = std::get_if<ConstantRelaxation>(&m.relaxation())) os << " relaxation=constant gamma_rad_s=" << c->gamma;
  else os << " relaxation=none";
  if (const auto* d = std::get_if<DebyePermeability>(&m.dispersion())) os << " dispersion=debye omega_m_rad_s=" << d->omega_m;
  else os << " dispersion=constant";
  return os.str();
}

inline std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

inline std::string flags_of(const RelaxedGates& g) { return g.violations().empty() ? "" : join(g.violations(), "; "); }

struct Context {
  const RunSpec& spec;
  MaterialEntry first;
  MaterialEntry second;
  NumericOptions opt;

  PlateConfiguration configuration(double a, double T) const { return {first.model, second.model, a, T}; }
};

inline std::vector<double> require_grid(const std::optional<GridSpec>& g, const char* name) {
  if (!g) throw ConfigError(std::string("missing --") + name);
  return g->values();
}

// Runs fn either with strict gates or, when forced, with gates recorded into the returned flags.
template <class F>
std::string gated(bool force, F&& fn) {
  if (!force) {
    fn();
    return "";
  }
  RelaxedGates relaxed;
  fn();
  return flags_of(relaxed);
}

inline void require_plasma_static_or(const RunSpec& s, const char* what) {
  if (s.model == Permittivity::drude && s.mu_mode != PermeabilityMode::static_mu)
    throw ConfigError(std::string(what) + ": the analytic Drude path supports mu-mode static only");
}

inline Table free_energy(const Context& ctx) {
  const RunSpec& s = ctx.spec;
  Table t;
  t.columns = {"a_m", "T_K", "t", "Lambda", "F_J_m2", "E_J_m2", "thermal_correction_J_m2", "flags"};
  if (s.method == Method::abel_plana && s.model != Permittivity::plasma)
    throw ConfigError("free-energy: the Abel-Plana representation is available for the plasma model only");
  if (s.method == Method::analytic) require_plasma_static_or(s, "free-energy");
  for (double a : require_grid(s.a, "a")) {
    for (double T : require_grid(s.T, "T")) {
      const PlateConfiguration cfg = ctx.configuration(a, T);
      const DimensionlessState st = dimensionless_state(cfg);
      double F = 0.0, E = 0.0, dF = 0.0;
      std::string flags;
      if (s.method == Method::numeric) {
        const FreeEnergyResult r = free_energy_matsubara(cfg, s.model, ctx.opt);
        F = r.total;
        E = r.zero_t_part;
        dF = r.thermal_correction;
      } else if (s.method == Method::abel_plana) {
        const FreeEnergyResult r = free_energy_abel_plana(cfg, ctx.opt);
        F = r.total;
        E = r.zero_t_part;
        dF = r.thermal_correction;
      } else {
        flags = gated(s.force, [&] {
          if (s.model == Permittivity::drude) {
            const DrudeDecomposition d = drude_free_energy(cfg, ctx.opt);
            E = zero_temperature_energy(cfg, Permittivity::drude, ctx.opt);
            F = d.total;
            dF = F - E;
            return;
          }
          E = zero_temperature_energy(cfg, Permittivity::plasma, ctx.opt);
          switch (s.mu_mode) {
            case PermeabilityMode::static_mu: dF = thermal_correction_series(cfg, st.Lambda); break;
            case PermeabilityMode::static_zero_term_only:
              dF = thermal_correction_static_mu_zero_only(cfg, st.Lambda, st.Lambda1, s.min_temperature);
              break;
            case PermeabilityMode::debye: dF = low_T_free_energy_debye(cfg, st.Lambda); break;
          }
          F = E + dF;
        });
      }
      t.rows.push_back({a, T, st.t, st.Lambda, F, E, dF, flags});
    }
  }
  return t;
}

inline Table entropy(const Context& ctx) {
  const RunSpec& s = ctx.spec;
  Table t;
  t.columns = {"a_m", "T_K", "tau", "Lambda", "S_J_K_m2", "S_error_J_K_m2", "flags"};
  if (s.method == Method::abel_plana) throw ConfigError("entropy: methods are numeric and analytic");
  if (s.method == Method::analytic) require_plasma_static_or(s, "entropy");
  for (double a : require_grid(s.a, "a")) {
    for (double T : require_grid(s.T, "T")) {
      const PlateConfiguration cfg = ctx.configuration(a, T);
      const DimensionlessState st = dimensionless_state(cfg);
      double S = 0.0, err = 0.0;
      std::string flags;
      if (s.method == Method::numeric) {
        const EntropyResult r = entropy_fd(cfg, s.model, 0.0, ctx.opt);
        S = r.S;
        err = r.error_estimate;
      } else {
        flags = gated(s.force, [&] {
          S = entropy_asymptotic(cfg, st.Lambda);
          if (s.model == Permittivity::drude) S += entropy_at_zero_T(cfg, st.Lambda) - f_gamma_derivative(cfg);
          if (s.mu_mode == PermeabilityMode::debye) S += entropy_correction_debye(cfg, st.Lambda);
          if (s.mu_mode == PermeabilityMode::static_zero_term_only)
            throw ConfigError("entropy: analytic path has no static-zero-term-only form");
        });
      }
      t.rows.push_back({a, T, st.tau, st.Lambda, S, err, flags});
    }
  }
  return t;
}

inline Table pressure(const Context& ctx) {
  const RunSpec& s = ctx.spec;
  Table t;
  t.columns = {"a_m", "T_K", "t", "Lambda", "P_Pa", "P_zero_T_Pa", "P_thermal_Pa", "error_Pa", "flags"};
  if (s.method == Method::abel_plana) throw ConfigError("pressure: methods are numeric and analytic");
  if (s.method == Method::analytic && (s.model != Permittivity::plasma || s.mu_mode == PermeabilityMode::debye))
    throw ConfigError("pressure: the analytic path needs the plasma model with mu-mode static or static-zero-term-only");
  for (double a : require_grid(s.a, "a")) {
    for (double T : require_grid(s.T, "T")) {
      const PlateConfiguration cfg = ctx.configuration(a, T);
      const DimensionlessState st = dimensionless_state(cfg);
      double P = 0.0, P0 = 0.0, dP = 0.0, err = 0.0;
      std::string flags;
      if (s.method == Method::numeric) {
        const PressureResult r = pressure_fd(cfg, s.model, 0.0, ctx.opt);
        P = r.total;
        P0 = r.zero_t_part;
        dP = r.thermal_correction;
        err = r.error_estimate;
      } else {
        flags = gated(s.force, [&] {
          dP = s.mu_mode == PermeabilityMode::static_mu
                   ? thermal_pressure_series(cfg, st.Lambda)
                   : pressure_correction(cfg, st.Lambda, st.Lambda1, s.min_temperature);
        });
        const FiniteDifference d = richardson_derivative(
            [&](double sep) { return zero_temperature_energy(cfg.at_separation(sep), Permittivity::plasma, ctx.opt); },
            a, a / 200.0);
        P0 = -d.value;
        err = d.error_estimate;
        P = P0 + dP;
      }
      t.rows.push_back({a, T, st.t, st.Lambda, P, P0, dP, err, flags});
    }
  }
  return t;
}

inline Table nernst(const Context& ctx) {
  const RunSpec& s = ctx.spec;
  const std::vector<double> as = require_grid(s.a, "a");
  if (as.size() != 1) throw ConfigError("nernst-scan: --a must be a single separation");
  std::vector<double> Ts = require_grid(s.T, "T");
  std::sort(Ts.begin(), Ts.end(), std::greater<>());
  const NernstReport r = nernst_scan(ctx.configuration(as.front(), Ts.front()), s.model, Ts, ctx.opt);
  Table t;
  t.columns = {"T_K", "tau", "S_J_K_m2", "S_error_J_K_m2", "fit_residual_J_K_m2"};
  for (std::size_t i = 0; i < Ts.size(); ++i)
    t.rows.push_back({r.T_grid[i], r.tau[i], r.S_values[i], r.S_errors[i], r.residuals[i]});
  t.summary = {{"extrapolated_S0_J_K_m2", r.extrapolated_S0},
               {"extrapolation_error_J_K_m2", r.extrapolation_error},
               {"atol_J_K_m2", r.atol},
               {"classification", std::string(to_string(r.classification))},
               {"predicted_S0_J_K_m2", r.predicted_S0},
               {"predicted_S0_integral_J_K_m2", r.predicted_S0_integral},
               {"relative_deviation", r.relative_deviation},
               {"non_monotone", std::string(r.non_monotone ? "true" : "false")}};
  return t;
}

inline Table sign_map(const Context& ctx) {
  const RunSpec& s = ctx.spec;
  if (!s.material2_path.empty()) throw ConfigError("sign-map: similar plates only; drop --material2");
  Table t;
  t.columns = {"a_m", "Lambda", "S0_J_K_m2", "sign", "S0_integral_J_K_m2", "flags"};
  for (const SignMapRow& r : entropy_sign_map(ctx.first.model, require_grid(s.a, "a")))
    t.rows.push_back({r.a, r.Lambda, r.S0, static_cast<long>(r.sign), r.S0_integral,
                      std::string(r.within_gate ? "" : "Lambda outside (0, 0.25)")});
  return t;
}

/// Default validation grid: Lambda in {0.05, 0.1, 0.15} x t in {5, 10, 20} for the plasma series;
/// a in {3, 5, 8} um at T = 10 K for the Drude decomposition.
inline std::vector<PlateConfiguration> default_validation_grid(const Context& ctx) {
  std::vector<PlateConfiguration> grid;
  if (ctx.spec.model == Permittivity::drude) {
    for (double a : {3e-6, 5e-6, 8e-6}) grid.push_back(ctx.configuration(a, 10.0));
    return grid;
  }
  const double lambda_a = dimensionless_state(ctx.configuration(1.0, 0.0)).Lambda;  // Lambda(a) = lambda_a / a
  for (double L : {0.05, 0.1, 0.15}) {
    const double a = lambda_a / L;
    for (double tt : {5.0, 10.0, 20.0})
      grid.push_back(ctx.configuration(a, constants::hbar * constants::c / (2.0 * a * constants::k_B * tt)));
  }
  return grid;
}

inline Table validate(const Context& ctx, bool& all_within) {
  const RunSpec& s = ctx.spec;
  std::vector<PlateConfiguration> grid;
  if (s.grid == "default") {
    grid = default_validation_grid(ctx);
  } else if (s.grid.empty()) {
    for (double a : require_grid(s.a, "a"))
      for (double T : require_grid(s.T, "T")) grid.push_back(ctx.configuration(a, T));
  } else {
    throw ConfigError("validate: --grid must be 'default' or omitted with --a and --T ranges");
  }
  const Comparison kind = s.model == Permittivity::plasma ? Comparison::plasma_series : Comparison::drude_decomposition;
  NumericOptions opt = ctx.opt;
  if (s.model == Permittivity::drude) opt.mu_mode = PermeabilityMode::static_mu;
  const std::vector<DiscrepancyRow> rows = discrepancy_table(grid, kind, opt);
  Table t;
  t.columns = {"a_m", "T_K", "t", "Lambda", "analytic_J_m2", "numeric_J_m2", "rel_diff", "bound", "within_bound", "flags"};
  all_within = true;
  for (const DiscrepancyRow& r : rows) {
    all_within = all_within && r.within_bound;
    t.rows.push_back({r.a, r.T, r.t, r.Lambda, r.analytic, r.numeric, r.rel_diff, r.bound,
                      std::string(r.within_bound ? "true" : "false"), join(r.gate_violations, "; ")});
  }
  t.summary = {{"comparison", std::string(to_string(kind))},
               {"rows_within_bound", static_cast<long>(std::count_if(rows.begin(), rows.end(),
                                                                     [](const auto& r) { return r.within_bound; }))},
               {"rows", static_cast<long>(rows.size())}};
  if (kind == Comparison::plasma_series && rows.size() >= 3) {
    bool positive = true;
    for (const auto& r : rows) positive = positive && r.rel_diff > 0.0;
    if (positive) t.summary.emplace_back("lambda_slope", lambda_slope(rows));
  }
  return t;
}

inline std::vector<std::pair<std::string, std::string>> metadata(const Context& ctx) {
  const RunSpec& s = ctx.spec;
  std::vector<std::pair<std::string, std::string>> m;
  m.emplace_back("program", std::string("casimag ") + version + " (" + CASIMAG_GIT_DESCRIBE + ")");
  m.emplace_back("command", to_string(s.command));
  m.emplace_back("plate_1", describe_material(ctx.first));
  m.emplace_back("plate_2", describe_material(ctx.second));
  m.emplace_back("model", to_string(s.model));
  m.emplace_back("mu_mode", to_string(s.mu_mode));
  m.emplace_back("method", to_string(s.method));
  if (s.a) m.emplace_back("a_grid_m", s.a->str());
  if (s.T) m.emplace_back("T_grid_K", s.T->str());
  if (!s.grid.empty()) m.emplace_back("grid", s.grid);
  m.emplace_back("tolerance", format_double(s.tol));
  m.emplace_back("l_max", std::to_string(s.l_max));
  m.emplace_back("static_mu_min_temperature_K", format_double(s.min_temperature));
  m.emplace_back("force", s.force ? "true" : "false");
  std::ostringstream c;
  c.precision(17);
  c << "hbar=" << constants::hbar << " J s, c=" << constants::c << " m/s, k_B=" << constants::k_B << " J/K ("
    << constants::source << ")";
  m.emplace_back("constants", c.str());
  return m;
}

}  // namespace detail

/// Exit statuses.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_validity = 3;
inline constexpr int exit_convergence = 4;

/// Executes one command and writes its table; diagnostics go to err.
inline int run(const RunSpec& spec, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (spec.material_path.empty()) throw ConfigError("missing --material");
    if (!(spec.tol >= 1e-15 && spec.tol < 1e-2)) throw ConfigError("--tol must lie in [1e-15, 1e-2)");
    const MaterialEntry first = load_material(spec.material_path, spec.material_name);
    const MaterialEntry second = spec.material2_path.empty()
                                     ? (spec.material2_name.empty() ? first : load_material(spec.material_path, spec.material2_name))
                                     : load_material(spec.material2_path, spec.material2_name);
    if (spec.mu_mode == PermeabilityMode::debye)
      for (const MaterialEntry* e : {&first, &second})
        if (!e->model.is_debye()) throw ConfigError("mu-mode debye requires omega_m_rad_s for material " + e->model.name());
    NumericOptions opt;
    opt.tol = spec.tol;
    if (spec.l_max < 1) throw ConfigError("--l-max must be positive");
    opt.l_max = spec.l_max;
    opt.mu_mode = spec.mu_mode;
    opt.threads = spec.threads;
    const detail::Context ctx{spec, first, second, opt};

    Table table;
    bool all_within = true;
    switch (spec.command) {
      case Command::free_energy: table = detail::free_energy(ctx); break;
      case Command::entropy: table = detail::entropy(ctx); break;
      case Command::pressure: table = detail::pressure(ctx); break;
      case Command::nernst_scan: table = detail::nernst(ctx); break;
      case Command::sign_map: table = detail::sign_map(ctx); break;
      case Command::validate: table = detail::validate(ctx, all_within); break;
    }
    table.metadata = detail::metadata(ctx);
    const std::string text = spec.format == Format::json ? render_json(table) : render_csv(table);
    if (spec.output.empty()) {
      out << text;
    } else {
      write_atomically(spec.output, text);
    }
    if (!all_within) {
      err << "casimag: validate: rows outside their bounds\n";
      return exit_failure;
    }
    return exit_ok;
  } catch (const ConfigError& e) {
    err << "casimag: configuration error: " << e.what() << '\n';
    return exit_config;
  } catch (const ValidityError& e) {
    err << "casimag: validity gate: " << e.what() << " (use --force to evaluate anyway)\n";
    return exit_validity;
  } catch (const ConvergenceError& e) {
    err << "casimag: no convergence: " << e.what() << '\n';
    return exit_convergence;
  } catch (const QuadratureError& e) {
    err << "casimag: no convergence: " << e.what() << '\n';
    return exit_convergence;
  } catch (const std::exception& e) {
    err << "casimag: error: " << e.what() << '\n';
    return exit_failure;
  }
}

}  // namespace casimag::cli
