// Two nickel plates: free energy, its perturbative decomposition, and the entropy sign threshold.
#include <cstdio>

#include "casimag/casimag.hpp"

using namespace casimag;

int main() {
  const MaterialModel ni = nickel(PerfectLattice{1e8});
  std::printf("positivity threshold: %.3f um\n", positivity_threshold(ni) * 1e6);

  for (double a : {3e-6, 5e-6, 8e-6}) {
    const PlateConfiguration cfg(ni, ni, a, 10.0);
    const DimensionlessState s = dimensionless_state(cfg);
    const FreeEnergyResult plasma = free_energy_matsubara(cfg, Permittivity::plasma);
    const FreeEnergyResult drude = free_energy_matsubara(cfg, Permittivity::drude);
    const DrudeDecomposition d = drude_free_energy(cfg);
    std::printf("a = %.0f um, Lambda = %.4f, t = %.2f\n", a * 1e6, s.Lambda, s.t);
    std::printf("  plasma F = %.6e J/m^2 (series thermal part %.6e, numeric %.6e)\n", plasma.total,
                thermal_correction_series(cfg, s.Lambda), plasma.thermal_correction);
    std::printf("  drude  F = %.6e J/m^2, analytic %.6e = F_p %.6e + F_0 %.6e + F_gamma %.6e\n", drude.total,
                d.total, d.F_p, d.F_0, d.F_gamma);
    std::printf("  drude S(T = 0) = %.6e J/(K m^2)\n", entropy_at_zero_T(cfg, s.Lambda));
  }
}
