#include <catch_amalgamated.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "casimag/material_config.hpp"
#include "casimag/materials.hpp"

using namespace casimag;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

MaterialModel unit_plasma(double omega_c, RelaxationLaw law = NoRelaxation{}) {
  return MaterialModel("unit", omega_c, law, 1.0, ConstantPermeability{});
}

}  // namespace

TEST_CASE("plasma permittivity", "[materials]") {
  const double wc = 1e15;
  CHECK_THAT(epsilon_plasma(unit_plasma(wc), 1.0, wc), WithinAbs(2.0, 1e-15));
  CHECK_THAT(epsilon_plasma(unit_plasma(wc), 1e9, wc), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(epsilon_plasma(unit_plasma(wc), 0.0, wc), ConfigError);

  const PlateConfiguration cfg(nickel(), nickel(), 5e-6, 300.0);
  const DimensionlessState s = dimensionless_state(cfg);
  // 1 + (omega_p / (omega_c zeta_1))^2 with omega_p = c / 40 nm and omega_c = c / 2a.
  CHECK_THAT(s.t, WithinRel(0.76329483973589277, 1e-12));
  CHECK_THAT(epsilon_plasma(nickel(), s.zeta(1), s.omega_c), WithinRel(923.36949914998556, 1e-12));
}

TEST_CASE("Drude permittivity", "[materials]") {
  const double wc = 1e15;
  CHECK_THAT(epsilon_drude(unit_plasma(wc, ConstantRelaxation{wc}), 1.0, wc, 0.0), WithinAbs(1.5, 1e-15));
  const MaterialModel no_loss = unit_plasma(wc, ConstantRelaxation{0.0});
  CHECK_THAT(epsilon_drude(no_loss, 0.7, wc, 10.0), WithinRel(epsilon_plasma(no_loss, 0.7, wc), 1e-15));
  CHECK_THROWS_AS(epsilon_drude(unit_plasma(wc), 1.0, wc, 1.0), ConfigError);

  const MaterialModel ni = nickel(PerfectLattice{1e10 / (4.2 * 4.2)});
  CHECK_THAT(relaxation_frequency(ni, 4.2), WithinRel(1e10, 1e-14));
  const PlateConfiguration cfg(ni, ni, 5e-6, 4.2);
  const DimensionlessState s = dimensionless_state(cfg);
  CHECK_THAT(epsilon_drude(ni, s.zeta(1), s.omega_c, 4.2), WithinRel(4692386.0314854320, 1e-12));
}

TEST_CASE("relaxation laws", "[materials]") {
  const MaterialModel pl = nickel(PerfectLattice{1e8});
  CHECK(relaxation_frequency(pl, 0.0) == 0.0);
  CHECK_THAT(relaxation_frequency(pl, 2.0), WithinRel(4e8, 1e-15));
  CHECK(relaxation_frequency(nickel(ConstantRelaxation{3e13}), 77.0) == 3e13);
  CHECK(relaxation_frequency(nickel(), 77.0) == 0.0);
}

TEST_CASE("permeability dispersion", "[materials]") {
  const double wc = 1e13;
  const MaterialModel d = nickel(NoRelaxation{}, DebyePermeability{wc});
  CHECK(mu_at_frequency(d, 0.0, wc) == 110.0);
  CHECK(mu_at_frequency(d, std::numeric_limits<double>::infinity(), wc) == 1.0);
  CHECK_THAT(mu_at_frequency(d, 1.0, wc), WithinAbs(55.5, 1e-12));
  CHECK(mu_at_frequency(nickel(), 1e6, wc) == 110.0);
}

TEST_CASE("dimensionless parameters", "[materials]") {
  const PlateConfiguration ni2(nickel(), nickel(), 2e-6, 300.0);
  CHECK_THAT(dimensionless_state(ni2).Lambda, WithinRel(0.20976176963403031, 1e-12));

  const MaterialModel au = MaterialModel::from_wavelength("Au", 137e-9, NoRelaxation{}, 1.0);
  const DimensionlessState s_au = dimensionless_state(PlateConfiguration(au, au, 3e-6, 10.0));
  CHECK(s_au.Lambda == s_au.Lambda1);

  const double a = 7e-6;
  const DimensionlessState s = dimensionless_state(PlateConfiguration(nickel(), nickel(), a, 10.0));
  const double lp = nickel().plasma_wavelength();
  CHECK_THAT(s.Lambda + s.Lambda1, WithinRel((std::sqrt(110.0) + 1.0) * lp / (2.0 * std::numbers::pi * a), 1e-14));
  CHECK_THAT(s.Lambda - s.Lambda1, WithinRel((std::sqrt(110.0) - 1.0) * lp / (2.0 * std::numbers::pi * a), 1e-14));
}

TEST_CASE("configuration errors", "[materials]") {
  CHECK_THROWS_AS(MaterialModel("x", -1.0, NoRelaxation{}, 1.0, ConstantPermeability{}), ConfigError);
  CHECK_THROWS_AS(MaterialModel("x", 1e15, NoRelaxation{}, 0.5, ConstantPermeability{}), ConfigError);
  CHECK_THROWS_AS(MaterialModel("x", 1e15, PerfectLattice{-1.0}, 1.0, ConstantPermeability{}), ConfigError);
  CHECK_THROWS_AS(MaterialModel("x", 1e15, NoRelaxation{}, 1.0, DebyePermeability{0.0}), ConfigError);
  CHECK_THROWS_AS(PlateConfiguration(nickel(), nickel(), 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(PlateConfiguration(nickel(), nickel(), 1e-6, -1.0), ConfigError);
}

TEST_CASE("permittivity and permeability properties", "[materials][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lz(-3.0, 3.0);
  std::uniform_real_distribution<double> lt(-1.0, 2.5);
  const MaterialModel ni = nickel(PerfectLattice{1e8}, DebyePermeability{1e14});
  for (int i = 0; i < 1000; ++i) {
    const double zeta = std::pow(10.0, lz(rng));
    const double T = std::pow(10.0, lt(rng));
    const double wc = 3e13;
    CHECK(epsilon_drude(ni, zeta, wc, T) < epsilon_plasma(ni, zeta, wc));
    const double mu = mu_at_frequency(ni, zeta, wc);
    CHECK(mu >= 1.0);
    CHECK(mu <= 110.0);
    CHECK(mu_at_frequency(ni, zeta * 1.01, wc) <= mu);
  }
  const PlateConfiguration cfg(ni, ni, 4e-6, 20.0);
  const DimensionlessState s = dimensionless_state(cfg);
  CHECK(s.zeta(1) == s.tau);
  const DimensionlessState d = dimensionless_state(cfg.at_separation(8e-6));
  CHECK_THAT(d.wp_tilde[0], WithinRel(2.0 * s.wp_tilde[0], 1e-15));
  CHECK_THAT(d.ae_m[0], WithinRel(0.5 * s.ae_m[0], 1e-15));
}

TEST_CASE("material file parsing", "[materials][config]") {
  std::istringstream in(
      "# comment\n[Ni]\nplasma_wavelength_nm = 251.32741228718345\nmu0 = 110\nrelaxation = perfect_lattice\n"
      "gamma0_rad_s_K2 = 1e8\ndispersion = debye\nomega_m_rad_s = 1e16\n\n[Au]\nplasma_frequency_rad_s = 1.37e16\n");
  const auto all = parse_materials(in);
  REQUIRE(all.size() == 2);
  CHECK(all[0].model.name() == "Ni");
  CHECK_THAT(all[0].model.plasma_frequency(), WithinRel(nickel().plasma_frequency(), 1e-14));
  CHECK(all[0].model.is_debye());
  CHECK(std::get<PerfectLattice>(all[0].model.relaxation()).gamma0 == 1e8);
  CHECK(all[1].model.mu0() == 1.0);
  CHECK_FALSE(all[1].model.has_relaxation());

  const MaterialEntry shipped = load_material(std::string(CASIMAG_DATA_DIR) + "/ni.cfg", "Ni");
  CHECK(shipped.model.mu0() == 110.0);
  CHECK_THAT(shipped.model.plasma_wavelength(), WithinRel(2.0 * std::numbers::pi * 40e-9, 1e-14));
  CHECK_FALSE(shipped.note.empty());
}

TEST_CASE("material file errors", "[materials][config]") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_materials(in);
  };
  CHECK_THROWS_AS(parse("[X]\nmu0 = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("[X]\nplasma_wavelength_nm = 100\nplasma_frequency_rad_s = 1e16\n"), ConfigError);
  CHECK_THROWS_AS(parse("[X]\nplasma_wavelength_nm = 100\ncolour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse("[X]\nplasma_wavelength_nm = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("[X]\nplasma_wavelength_nm = 100\ndispersion = debye\n"), ConfigError);
  CHECK_THROWS_AS(parse("[X]\nplasma_wavelength_nm = 100\nrelaxation = sometimes\n"), ConfigError);
  CHECK_THROWS_AS(parse("plasma_wavelength_nm = 100\n"), ConfigError);
  CHECK_THROWS_AS(parse(""), ConfigError);
  CHECK_THROWS_AS(load_material("/nonexistent/file.cfg"), ConfigError);
  CHECK_THROWS_AS(load_material(std::string(CASIMAG_DATA_DIR) + "/ni.cfg", "Cu"), ConfigError);
}
