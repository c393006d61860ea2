#include "isr/kinetics.hpp"

#include <stdexcept>

namespace isr {

namespace {

// Clamp indicator: 1 on [0, inf), 0 below (matches clamp0).
inline double pos(double x) { return x >= 0.0 ? 1.0 : 0.0; }

inline double sigmoid_slope(double s, double l) {
  // d/dx of 1/(1+exp(l(x-x_th))) expressed through the value s
  return -l * s * (1.0 - s);
}

inline double hill_complement_slope(double c, double A, double B, double n) {
  if (c <= 0.0) return 0.0;
  const double cn = std::pow(c, n);
  const double Bn = std::pow(B, n);
  const double den = cn + Bn;
  return -(A / 100.0) * n * std::pow(c, n - 1.0) * Bn / (den * den);
}

} // namespace

ReactionRates reaction_rates(const LocalState& state, Layer layer,
                             const ModelParams& p) {
  for (double v : {state.c_P, state.c_T, state.c_C, state.c_D, state.rho_S})
    if (!std::isfinite(v))
      throw std::domain_error("reaction_rates: non-finite field value");

  const double c_P = std::max(state.c_P, 0.0);
  const double c_T = std::max(state.c_T, 0.0);
  const double c_C = std::max(state.c_C, 0.0);
  const double c_D = std::max(state.c_D, 0.0);
  const double rho_S = std::max(state.rho_S, 0.0);

  const double to_nM = 1.0 / units::mol_per_mm3_per_nM;
  const double c_D_nM = c_D * to_nM;
  const double B_S_nM = p.B_S * to_nM;
  const double r = p.r_eta(layer);

  const double fP1 = f_P1(c_D_nM, p.l_P1);
  const double fP2 = sigmoid_drop(c_T, p.l_P2, p.c_T_th);
  const double fS2 = saturation(p.kappa_P * c_P, p.l_S2);
  const double fS3 = sigmoid_drop(c_T, p.l_S3, p.c_T_th);
  const double fS4 = hill_complement(c_D_nM, p.A_S, B_S_nM, p.alpha_hill);
  const double room = 1.0 - c_C / p.c_C_th;

  const double dfP1 = -p.l_P1 * fP1 * to_nM * pos(state.c_D);
  const double dfP2 = sigmoid_slope(fP2, p.l_P2) * pos(state.c_T);
  const double dfS2 = p.l_S2 * p.kappa_P * std::exp(-p.l_S2 * p.kappa_P * c_P) *
                      pos(state.c_P);
  const double dfS3 = sigmoid_slope(fS3, p.l_S3) * pos(state.c_T);
  const double dfS4 = hill_complement_slope(c_D_nM, p.A_S, B_S_nM, p.alpha_hill) *
                      to_nM * pos(state.c_D);

  const double iP = pos(state.c_P), iT = pos(state.c_T), iC = pos(state.c_C),
               iD = pos(state.c_D), iS = pos(state.rho_S);

  ReactionRates out;
  auto& R = out.rate;
  auto& dR = out.d_rate;

  // PDGF: secretion by SMCs and macrophages minus receptor internalization
  const double src_gate = (1.0 - r) + r * fP1;
  R[field_cP] = src_gate * p.eta_P * rho_S * c_T - p.eps_P * fP2 * rho_S * c_P;
  dR[field_cP][field_cP] = -p.eps_P * fP2 * rho_S * iP;
  dR[field_cP][field_cT] =
      src_gate * p.eta_P * rho_S * iT - p.eps_P * dfP2 * rho_S * c_P;
  dR[field_cP][field_cD] = r * dfP1 * p.eta_P * rho_S * c_T;
  dR[field_cP][field_rS] =
      (src_gate * p.eta_P * c_T - p.eps_P * fP2 * c_P) * iS;

  // TGF-beta: receptor internalization only
  R[field_cT] = -p.eps_T * rho_S * c_T;
  dR[field_cT][field_cT] = -p.eps_T * rho_S * iT;
  dR[field_cT][field_rS] = -p.eps_T * c_T * iS;

  // ECM: secretion up to the threshold minus MMP-induced degradation
  R[field_cC] = p.eta_C * rho_S * room - p.eps_C * c_P * c_C;
  dR[field_cC][field_cP] = -p.eps_C * c_C * iP;
  dR[field_cC][field_cC] =
      (-p.eta_C * rho_S / p.c_C_th - p.eps_C * c_P) * iC;
  dR[field_cC][field_rS] = p.eta_C * room * iS;

  // drug: receptor internalization by SMCs
  R[field_cD] = -p.eps_D1 * rho_S * c_D;
  dR[field_cD][field_cD] = -p.eps_D1 * rho_S * iD;
  dR[field_cD][field_rS] = -p.eps_D1 * c_D * iS;

  // SMC: proliferation gated by PDGF, TGF-beta, drug and ECM room
  const double eta_S = p.eta_S(layer);
  R[field_rS] = eta_S * fS2 * fS3 * fS4 * rho_S * room;
  dR[field_rS][field_cP] = eta_S * dfS2 * fS3 * fS4 * rho_S * room;
  dR[field_rS][field_cT] = eta_S * fS2 * dfS3 * fS4 * rho_S * room;
  dR[field_rS][field_cC] = -eta_S * fS2 * fS3 * fS4 * rho_S / p.c_C_th * iC;
  dR[field_rS][field_cD] = eta_S * fS2 * fS3 * dfS4 * rho_S * room;
  dR[field_rS][field_rS] = eta_S * fS2 * fS3 * fS4 * room * iS;

  return out;
}

EcRates ec_rates(double rho_E_in, double c_D_nM_in, const ModelParams& p) {
  const double rho_E = std::max(rho_E_in, 0.0);
  const double c_D_nM = std::max(c_D_nM_in, 0.0);
  const double B_E_nM = p.B_E / units::mol_per_mm3_per_nM;

  const double fE1 = hill_complement(c_D_nM, p.A_E, B_E_nM, p.beta_hill);
  const double fE2 = saturation(c_D_nM, p.l_E);
  const double dfE1 =
      hill_complement_slope(c_D_nM, p.A_E, B_E_nM, p.beta_hill) * pos(c_D_nM_in);
  const double dfE2 = p.l_E * std::exp(-p.l_E * c_D_nM) * pos(c_D_nM_in);

  EcRates out;
  const double logistic = rho_E * (1.0 - rho_E / p.rho_E_eq);
  out.rate = p.eta_E * fE1 * logistic - p.eps_E * fE2 * rho_E;
  out.d_rho_E = (p.eta_E * fE1 * (1.0 - 2.0 * rho_E / p.rho_E_eq) -
                 p.eps_E * fE2) *
                pos(rho_E_in);
  out.d_c_D_nM = p.eta_E * dfE1 * logistic - p.eps_E * dfE2 * rho_E;
  return out;
}

TaxisVelocities taxis_velocities(const LocalState& state, Layer layer,
                                 const ModelParams& p) {
  if (!state.grad_c_P.allFinite() || !state.grad_c_C.allFinite())
    throw std::domain_error("taxis_velocities: non-finite gradient");
  const double c_P = std::max(state.c_P, 0.0);
  const double c_C = std::max(state.c_C, 0.0);
  const double rho_S = std::max(state.rho_S, 0.0);

  TaxisVelocities v;
  v.v_S1 = p.chi_S1(layer) * (1.0 - c_C / p.c_C_th) * rho_S * state.grad_c_P;
  v.v_S2 = -p.chi_S2(layer) * sigmoid_drop(c_P, -p.l_S1, p.c_P_th) * rho_S *
           state.grad_c_C;
  return v;
}

BoundaryFluxes boundary_fluxes(double t, double rho_E, double c_D,
                               BoundaryRegion region, const ModelParams& p,
                               const ReleaseProfile& release) {
  if (t < 0.0) throw std::domain_error("boundary_fluxes: negative time");
  BoundaryFluxes q;
  switch (region) {
    case BoundaryRegion::endothelium: {
      const double gate = f_B1(t, p.l_B) * gf_influx_gate(rho_E, p);
      q.q_P = gate * p.q_P_ref;
      q.q_T = gate * p.q_T_ref;
      q.q_D = -drug_uptake(rho_E, c_D, p);
      return q;
    }
    case BoundaryRegion::stent:
      q.q_D = f_B2(t, release) * release.q_D_ref;
      return q;
    case BoundaryRegion::other:
      return q;
  }
  throw std::invalid_argument("boundary_fluxes: unknown region tag");
}

} // namespace isr
