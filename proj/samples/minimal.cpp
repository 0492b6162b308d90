// Bounds for vacuum vs a thermal state with nu = 2, single copy.
#include <cstdio>

#include "gaussbound/gaussbound.hpp"

int main() {
  using namespace gaussbound;
  const GaussianState a = vacuum(1);
  const GaussianState b = thermal({2.0});

  const ChernoffBound qc = chernoff_bound(a, b, 1);
  const SpectralBound m = minkowski_bound(a, b, 1);
  const SpectralBound y = young_bound(a, b, 1);
  const FidelityBounds f = fidelity_bounds(fidelity_one_mode(a, b));
  const double p = fock::helstrom_error(*fock::representation(a), *fock::representation(b));

  std::printf("F-        %.9f\n", f.f_minus);
  std::printf("Helstrom  %.9f\n", p);
  std::printf("P_QC      %.9f  (s* = %.6f)\n", qc.value, qc.s_star);
  std::printf("M         %.9f\n", m.value);
  std::printf("Y         %.9f\n", y.value);
  std::printf("F+        %.9f\n", f.f_plus);
}
