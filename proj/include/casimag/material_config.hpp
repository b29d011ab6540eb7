#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "materials.hpp"

namespace casimag {

// Material files are INI documents with one section per material:
//
//   [Ni]
//   plasma_wavelength_nm = 251.327412
//   mu0 = 110
//   relaxation = perfect_lattice
//   gamma0_rad_s_K2 = 1e8
//   dispersion = debye
//   omega_m_rad_s = 1e16
//   note = free text
//
// plasma_frequency_rad_s may replace plasma_wavelength_nm. relaxation is none, perfect_lattice
// (gamma0_rad_s_K2) or constant (gamma_rad_s); dispersion is constant or debye (omega_m_rad_s).
// Whole-line comments start with '#' or ';'.

struct MaterialEntry {
  MaterialModel model;
  std::string note;
};

namespace detail {

inline double required_number(const boost::property_tree::ptree& sec, const std::string& section,
                              const std::string& key) {
  const auto v = sec.get_optional<std::string>(key);
  if (!v) throw ConfigError("material [" + section + "]: missing key '" + key + "'");
  try {
    std::size_t used = 0;
    const double x = std::stod(*v, &used);
    if (used != v->size() || !std::isfinite(x)) throw std::invalid_argument(*v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("material [" + section + "]: key '" + key + "' is not a number: " + *v);
  }
}

inline MaterialEntry parse_material_section(const std::string& name, const boost::property_tree::ptree& sec) {
  static const std::set<std::string> known{"plasma_wavelength_nm", "plasma_frequency_rad_s", "mu0", "relaxation",
                                           "gamma0_rad_s_K2", "gamma_rad_s", "dispersion", "omega_m_rad_s", "note"};
  for (const auto& kv : sec)
    if (!known.count(kv.first)) throw ConfigError("material [" + name + "]: unknown key '" + kv.first + "'");

  const bool has_lambda = sec.count("plasma_wavelength_nm") > 0;
  const bool has_omega = sec.count("plasma_frequency_rad_s") > 0;
  if (has_lambda == has_omega)
    throw ConfigError("material [" + name + "]: give exactly one of plasma_wavelength_nm, plasma_frequency_rad_s");
  const double omega_p = has_lambda
                             ? 2.0 * constants::pi * constants::c / (1e-9 * required_number(sec, name, "plasma_wavelength_nm"))
                             : required_number(sec, name, "plasma_frequency_rad_s");
  const double mu0 = sec.count("mu0") ? required_number(sec, name, "mu0") : 1.0;

  RelaxationLaw relaxation = NoRelaxation{};
  const std::string rel = sec.get<std::string>("relaxation", "none");
  if (rel == "perfect_lattice") {
    relaxation = PerfectLattice{required_number(sec, name, "gamma0_rad_s_K2")};
  } else if (rel == "constant") {
    relaxation = ConstantRelaxation{required_number(sec, name, "gamma_rad_s")};
  } else if (rel != "none") {
    throw ConfigError("material [" + name + "]: relaxation must be none, perfect_lattice or constant");
  }

  PermeabilityDispersion dispersion = ConstantPermeability{};
  const std::string disp = sec.get<std::string>("dispersion", "constant");
  if (disp == "debye") {
    dispersion = DebyePermeability{required_number(sec, name, "omega_m_rad_s")};
  } else if (disp != "constant") {
    throw ConfigError("material [" + name + "]: dispersion must be constant or debye");
  }
  return {MaterialModel(name, omega_p, relaxation, mu0, dispersion), sec.get<std::string>("note", "")};
}

}  // namespace detail

/// All materials defined in an INI stream, in file order.
inline std::vector<MaterialEntry> parse_materials(std::istream& in, const std::string& origin = "<stream>") {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  std::vector<MaterialEntry> out;
  for (const auto& [name, sec] : tree) {
    if (sec.empty() && !sec.data().empty())
      throw ConfigError(origin + ": key '" + name + "' outside a [material] section");
    out.push_back(detail::parse_material_section(name, sec));
  }
  if (out.empty()) throw ConfigError(origin + ": no material sections");
  return out;
}

/// Loads a material file; picks the named section, or the first one when name is empty.
inline MaterialEntry load_material(const std::string& path, const std::string& name = "") {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open material file " + path);
  const std::vector<MaterialEntry> all = parse_materials(in, path);
  if (name.empty()) return all.front();
  for (const MaterialEntry& e : all)
    if (e.model.name() == name) return e;
  throw ConfigError(path + ": no material section [" + name + "]");
}

}  // namespace casimag
