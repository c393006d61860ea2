#ifndef ISR_PARAMS_HPP
#define ISR_PARAMS_HPP

#include "isr/config.hpp"
#include "isr/types.hpp"

namespace isr {

/// Pair of values for the two wall layers.
template <typename T>
struct PerLayer {
  T media{};
  T adventitia{};
  const T& operator()(Layer l) const {
    return l == Layer::media ? media : adventitia;
  }
};

/// Drug influx shape on the stent surface: peak reference flux and the two
/// time constants of the release curve.
struct ReleaseProfile {
  double q_D_ref = 0.0; ///< peak drug influx [mol/mm^2/day]
  double t_p = 1.0;     ///< time to peak influx [day]
  double t_c = 1.0;     ///< curvature time constant [day]
};

/// Default initial values of the transport fields (healthy artery unless
/// overridden).
struct InitialConditions {
  double c_P = 0.0;
  double c_T = 0.0;
  double c_C = 0.0; ///< defaults to c_C_eq
  double c_D = 0.0;
  double rho_S = 0.0;         ///< defaults to rho_S_eq
  double rho_E_healthy = 0.0; ///< defaults to rho_E_eq
  double rho_E_denuded = 0.0;
};

/// All model constants in the internal unit system (mm, day, mol, cells,
/// MPa). Dose-response parameters tabulated in nM (l_P1, l_E) stay in nM^-1
/// and are applied to concentrations converted via convert_drug_to_nM; the
/// half-efficacy doses B_S, B_E are stored in mol/mm^3.
struct ModelParams {
  // PDGF
  double D_P = 0.0;             ///< diffusivity [mm^2/day]
  PerLayer<double> r_eta;       ///< secretion ratio [-]
  double eta_P = 0.0;           ///< autocrine secretion coefficient [mm^3/cell/day]
  double l_P1 = 0.0;            ///< anti-inflammatory dose parameter [1/nM]
  double eps_P = 0.0;           ///< receptor internalization [mm^3/cell/day]
  double l_P2 = 0.0;            ///< receptor-drop steepness [mm^3/mol]
  double c_T_th = 0.0;          ///< TGF-beta threshold [mol/mm^3]

  // TGF-beta and ECM
  double D_T = 0.0;             ///< diffusivity [mm^2/day]
  double eps_T = 0.0;           ///< receptor internalization [mm^3/cell/day]
  double eta_C = 0.0;           ///< collagen secretion [mol/cell/day]
  double eps_C = 0.0;           ///< collagen degradation [mm^3/mol/day]
  double c_C_th = 0.0;          ///< collagen secretion threshold [mol/mm^3]

  // drug
  double D_D = 0.0;             ///< diffusivity [mm^2/day]
  double eps_D1 = 0.0;          ///< SMC receptor internalization [mm^3/cell/day]

  // SMC
  PerLayer<double> chi_S1;      ///< chemotactic sensitivity [mm^5/mol/day]
  PerLayer<double> chi_S2;      ///< haptotactic sensitivity [mm^5/mol/day]
  double l_S1 = 0.0;            ///< haptotaxis switch steepness [mm^3/mol]
  double c_P_th = 0.0;          ///< PDGF threshold for haptotaxis [mol/mm^3]
  PerLayer<double> eta_S;       ///< proliferation coefficient [1/day]
  double l_S2 = 0.0;            ///< PDGF receptor saturation [ml/ng]
  double l_S3 = 0.0;            ///< proliferation modulation steepness [mm^3/mol]
  double A_S = 0.0;             ///< max drug efficacy on SMC proliferation [%]
  double B_S = 0.0;             ///< half-efficacy dose [mol/mm^3]
  double alpha_hill = 0.0;      ///< Hill coefficient (SMC) [-]

  // EC
  double D_E = 0.0;             ///< surface diffusivity [mm^2/day]
  double eta_E = 0.0;           ///< proliferation coefficient [1/day]
  double rho_E_eq = 0.0;        ///< healthy EC density [cells/mm^2]
  double A_E = 0.0;             ///< max drug efficacy on EC proliferation [%]
  double B_E = 0.0;             ///< half-efficacy dose [mol/mm^3]
  double beta_hill = 0.0;       ///< Hill coefficient (EC) [-]
  double eps_E = 0.0;           ///< apoptosis coefficient [1/day]
  double l_E = 0.0;             ///< apoptosis dose parameter [1/nM]

  // structural
  PerLayer<double> mu;          ///< matrix shear modulus [MPa]
  double Lambda = 0.0;          ///< matrix Lame parameter [MPa]
  PerLayer<double> k1_bar;      ///< collagen stress-like parameter [MPa]
  PerLayer<double> k2;          ///< collagen exponential coefficient [-]
  PerLayer<double> alpha_a;     ///< collagen orientation angle [rad]

  // homeostatic values (not tabulated; must be supplied / flagged defaults)
  double rho_S_eq = 0.0;        ///< homeostatic SMC density [cells/mm^3]
  double c_C_eq = 0.0;          ///< homeostatic ECM concentration [mol/mm^3]
  double kappa_P = 0.0;         ///< PDGF unit bridge [ng/ml per mol/mm^3]

  // boundary conditions
  double q_P_ref = 0.0;         ///< peak PDGF influx [mol/mm^2/day]
  double q_T_ref = 0.0;         ///< peak TGF-beta influx [mol/mm^2/day]
  double l_B = 0.0;             ///< growth-factor influx ramp rate [1/day]
  double eps_D2 = 0.0;          ///< EC drug uptake coefficient [mm^3/cell/day]
  ReleaseProfile release;

  InitialConditions ic;

  /// Growth stretch floor guarding against vanishing SMC density.
  double theta_floor = 1.0e-6;
};

/// Builds a validated, unit-converted parameter set from a configuration
/// document. Defaults are the published table values; quantities without a
/// published value (rho_S_eq, kappa_P and all [bc] references) must be
/// present in the document.
ModelParams load_params(const ConfigDoc& doc);

/// Writes the parameter set back into a document using the same external
/// units the loader accepts (nM, %, degrees, fmol/mm^2/day).
ConfigDoc save_params(const ModelParams& p);

} // namespace isr

#endif
