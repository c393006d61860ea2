#ifndef ISR_UNITS_HPP
#define ISR_UNITS_HPP

#include <stdexcept>

namespace isr {

// Internal unit system: mm, day, mol, cells, MPa. Every parameter is
// converted into this system once, at load time.
namespace units {

/// 1 nM = 1e-9 mol/L = 1e-15 mol/mm^3.
inline constexpr double mol_per_mm3_per_nM = 1.0e-15;

/// 1 fmol = 1e-15 mol.
inline constexpr double mol_per_fmol = 1.0e-15;

inline constexpr double rad_per_deg = 3.14159265358979323846 / 180.0;

inline double nM_to_mol_per_mm3(double c_nM) {
  return c_nM * mol_per_mm3_per_nM;
}

} // namespace units

/// Drug concentration in nM from the internal mol/mm^3 value. The
/// dose-response curves are parameterized in nM.
inline double convert_drug_to_nM(double c_D) {
  if (c_D < 0.0)
    throw std::domain_error("convert_drug_to_nM: negative concentration");
  return c_D / units::mol_per_mm3_per_nM;
}

} // namespace isr

#endif
