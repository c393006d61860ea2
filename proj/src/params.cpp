#include "isr/params.hpp"

#include "isr/units.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace isr {

namespace {

void require_nonneg(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw std::runtime_error(std::string("params: ") + name +
                             " must be finite and >= 0");
}

void require_pos(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::runtime_error(std::string("params: ") + name +
                             " must be finite and > 0");
}

void require_range(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi))
    throw std::runtime_error(std::string("params: ") + name +
                             " out of range [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
}

PerLayer<double> layered(const ConfigDoc& doc, const std::string& key,
                         std::pair<double, double> fallback) {
  const auto [m, a] = doc.get_layered("kinetics", key, fallback);
  return {m, a};
}

double required(const ConfigDoc& doc, const std::string& section,
                const std::string& key) {
  if (!doc.has(section, key))
    throw std::runtime_error("params: missing required key [" + section + "] " +
                             key + " (no published default)");
  return doc.get_scalar(section, key);
}

} // namespace

ModelParams load_params(const ConfigDoc& doc) {
  ModelParams p;

  // PDGF (defaults: published PDGF parameter table)
  p.D_P = doc.get_scalar("kinetics", "D_P", 0.1);
  p.r_eta = layered(doc, "r_eta", {0.5, 0.0});
  p.eta_P = doc.get_scalar("kinetics", "eta_P", 1.0e-6);
  p.l_P1 = doc.get_scalar("kinetics", "l_P1", 1.0); // [1/nM]
  p.eps_P = doc.get_scalar("kinetics", "eps_P", 1.0e-7);
  p.l_P2 = doc.get_scalar("kinetics", "l_P2", 1.0e16);
  p.c_T_th = doc.get_scalar("kinetics", "c_T_th", 1.0e-16);

  // TGF-beta and ECM
  p.D_T = doc.get_scalar("kinetics", "D_T", 0.1);
  p.eps_T = doc.get_scalar("kinetics", "eps_T", 1.0e-7);
  p.eta_C = doc.get_scalar("kinetics", "eta_C", 1.0e-8);
  p.eps_C = doc.get_scalar("kinetics", "eps_C", 1.0e21);
  p.c_C_th = doc.get_scalar("kinetics", "c_C_th", 7.0007e-9);

  // drug
  p.D_D = doc.get_scalar("kinetics", "D_D", 0.05);
  p.eps_D1 = doc.get_scalar("kinetics", "eps_D1", 1.0e-8);

  // SMC
  p.chi_S1 = layered(doc, "chi_S1", {1.0e14, 1.0e13});
  p.chi_S2 = layered(doc, "chi_S2", {1.0e7, 1.0e6});
  p.l_S1 = doc.get_scalar("kinetics", "l_S1", 1.0e16);
  p.c_P_th = doc.get_scalar("kinetics", "c_P_th", 1.0e-15);
  p.eta_S = layered(doc, "eta_S", {0.4, 0.2});
  p.l_S2 = doc.get_scalar("kinetics", "l_S2", 1.0e-7); // [ml/ng]
  p.l_S3 = doc.get_scalar("kinetics", "l_S3", 1.0e16);
  p.A_S = doc.get_scalar("kinetics", "A_S", 69.8); // [%]
  p.B_S = units::nM_to_mol_per_mm3(doc.get_scalar("kinetics", "B_S", 2.2));
  p.alpha_hill = doc.get_scalar("kinetics", "alpha", 2.96);

  // EC
  p.D_E = doc.get_scalar("kinetics", "D_E", 0.01);
  p.eta_E = doc.get_scalar("kinetics", "eta_E", 0.1);
  p.rho_E_eq = doc.get_scalar("kinetics", "rho_E_eq", 500.0);
  p.A_E = doc.get_scalar("kinetics", "A_E", 65.4); // [%]
  p.B_E = units::nM_to_mol_per_mm3(doc.get_scalar("kinetics", "B_E", 9.19));
  p.beta_hill = doc.get_scalar("kinetics", "beta", 1.46);
  p.eps_E = doc.get_scalar("kinetics", "eps_E", 0.01);
  p.l_E = doc.get_scalar("kinetics", "l_E", 0.2); // [1/nM]

  // homeostatic values: rho_S_eq and kappa_P have no published value
  p.rho_S_eq = required(doc, "kinetics", "rho_S_eq");
  p.kappa_P = required(doc, "kinetics", "kappa_P");
  p.c_C_eq = doc.get_scalar("kinetics", "c_C_eq", p.c_C_th);

  // structural
  {
    auto lay = [&](const char* key, std::pair<double, double> fb) {
      const auto [m, a] = doc.get_layered("mechanics", key, fb);
      return PerLayer<double>{m, a};
    };
    p.mu = lay("mu", {0.02, 0.008});
    p.Lambda = doc.get_scalar("mechanics", "Lambda", 10.0);
    p.k1_bar = lay("k1_bar", {0.112, 0.362});
    p.k2 = lay("k2", {20.61, 7.089});
    const auto aa = lay("alpha_a", {41.0, 50.1}); // [deg]
    p.alpha_a = {aa.media * units::rad_per_deg,
                 aa.adventitia * units::rad_per_deg};
    p.theta_floor = doc.get_scalar("mechanics", "theta_floor", 1.0e-6);
  }

  // boundary conditions; flux references are given in fmol/mm^2/day
  p.q_P_ref = required(doc, "bc", "q_P_ref") * units::mol_per_fmol;
  p.q_T_ref = required(doc, "bc", "q_T_ref") * units::mol_per_fmol;
  p.l_B = required(doc, "bc", "l_B");
  p.eps_D2 = required(doc, "bc", "eps_D2");
  p.release.q_D_ref = required(doc, "bc", "q_D_ref") * units::mol_per_fmol;
  p.release.t_p = required(doc, "bc", "t_p");
  p.release.t_c = required(doc, "bc", "t_c");

  // initial conditions
  p.ic.c_P = doc.get_scalar("ic", "c_P_0", 0.0);
  p.ic.c_T = doc.get_scalar("ic", "c_T_0", 0.0);
  p.ic.c_C = doc.get_scalar("ic", "c_C_0", p.c_C_eq);
  p.ic.c_D = doc.get_scalar("ic", "c_D_0", 0.0);
  p.ic.rho_S = doc.get_scalar("ic", "rho_S_0", p.rho_S_eq);
  p.ic.rho_E_healthy = doc.get_scalar("ic", "rho_E_healthy_0", p.rho_E_eq);
  p.ic.rho_E_denuded = doc.get_scalar("ic", "rho_E_denuded_0", 0.0);

  // reject unknown keys in the sections owned by this loader
  {
    const std::set<std::string> owned = {"kinetics", "mechanics", "bc", "ic"};
    for (const auto& id : doc.unconsumed_keys()) {
      const auto dot = id.find('.');
      if (owned.count(id.substr(0, dot)))
        throw std::runtime_error("params: unknown key " + id);
    }
  }

  // validation
  require_nonneg(p.D_P, "D_P");
  require_nonneg(p.D_T, "D_T");
  require_nonneg(p.D_D, "D_D");
  require_nonneg(p.D_E, "D_E");
  require_range(p.r_eta.media, 0.0, 1.0, "r_eta (media)");
  require_range(p.r_eta.adventitia, 0.0, 1.0, "r_eta (adventitia)");
  require_nonneg(p.eta_P, "eta_P");
  require_nonneg(p.eps_P, "eps_P");
  require_nonneg(p.eps_T, "eps_T");
  require_nonneg(p.eta_C, "eta_C");
  require_nonneg(p.eps_C, "eps_C");
  require_nonneg(p.eps_D1, "eps_D1");
  require_nonneg(p.eps_D2, "eps_D2");
  require_nonneg(p.eta_E, "eta_E");
  require_nonneg(p.eps_E, "eps_E");
  for (Layer l : {Layer::media, Layer::adventitia}) {
    require_nonneg(p.eta_S(l), "eta_S");
    require_nonneg(p.chi_S1(l), "chi_S1");
    require_nonneg(p.chi_S2(l), "chi_S2");
    require_pos(p.mu(l), "mu");
    require_nonneg(p.k1_bar(l), "k1_bar");
    require_pos(p.k2(l), "k2");
  }
  require_nonneg(p.l_P1, "l_P1");
  require_nonneg(p.l_P2, "l_P2");
  require_nonneg(p.l_S1, "l_S1");
  require_nonneg(p.l_S2, "l_S2");
  require_nonneg(p.l_S3, "l_S3");
  require_nonneg(p.l_E, "l_E");
  require_nonneg(p.l_B, "l_B");
  require_nonneg(p.c_T_th, "c_T_th");
  require_pos(p.c_C_th, "c_C_th");
  require_nonneg(p.c_P_th, "c_P_th");
  require_range(p.A_S, 0.0, 100.0, "A_S");
  require_range(p.A_E, 0.0, 100.0, "A_E");
  require_pos(p.B_S, "B_S");
  require_pos(p.B_E, "B_E");
  require_pos(p.alpha_hill, "alpha");
  require_pos(p.beta_hill, "beta");
  require_pos(p.Lambda, "Lambda");
  require_pos(p.rho_S_eq, "rho_S_eq");
  require_pos(p.rho_E_eq, "rho_E_eq");
  require_pos(p.c_C_eq, "c_C_eq");
  require_pos(p.kappa_P, "kappa_P");
  require_nonneg(p.q_P_ref, "q_P_ref");
  require_nonneg(p.q_T_ref, "q_T_ref");
  require_nonneg(p.release.q_D_ref, "q_D_ref");
  require_pos(p.release.t_p, "t_p");
  require_pos(p.release.t_c, "t_c");
  // the release curve decay constant t_p exp(t_p/t_c) - t_c must be positive
  if (p.release.t_p * std::exp(p.release.t_p / p.release.t_c) <=
      p.release.t_c)
    throw std::runtime_error(
        "params: release profile does not decay (t_p exp(t_p/t_c) <= t_c)");
  require_pos(p.theta_floor, "theta_floor");
  require_nonneg(p.ic.c_P, "c_P_0");
  require_nonneg(p.ic.c_T, "c_T_0");
  require_nonneg(p.ic.c_C, "c_C_0");
  require_nonneg(p.ic.c_D, "c_D_0");
  require_nonneg(p.ic.rho_S, "rho_S_0");
  require_nonneg(p.ic.rho_E_healthy, "rho_E_healthy_0");
  require_nonneg(p.ic.rho_E_denuded, "rho_E_denuded_0");

  return p;
}

ConfigDoc save_params(const ModelParams& p) {
  ConfigDoc doc;
  auto set2 = [&](const std::string& sec, const std::string& key,
                  const PerLayer<double>& v) {
    ConfigDoc tmp;
    tmp.set_scalar("x", "m", v.media);
    tmp.set_scalar("x", "a", v.adventitia);
    doc.set(sec, key, {tmp.tokens("x", "m")[0], tmp.tokens("x", "a")[0]});
  };

  doc.set_scalar("kinetics", "D_P", p.D_P);
  set2("kinetics", "r_eta", p.r_eta);
  doc.set_scalar("kinetics", "eta_P", p.eta_P);
  doc.set_scalar("kinetics", "l_P1", p.l_P1);
  doc.set_scalar("kinetics", "eps_P", p.eps_P);
  doc.set_scalar("kinetics", "l_P2", p.l_P2);
  doc.set_scalar("kinetics", "c_T_th", p.c_T_th);
  doc.set_scalar("kinetics", "D_T", p.D_T);
  doc.set_scalar("kinetics", "eps_T", p.eps_T);
  doc.set_scalar("kinetics", "eta_C", p.eta_C);
  doc.set_scalar("kinetics", "eps_C", p.eps_C);
  doc.set_scalar("kinetics", "c_C_th", p.c_C_th);
  doc.set_scalar("kinetics", "D_D", p.D_D);
  doc.set_scalar("kinetics", "eps_D1", p.eps_D1);
  set2("kinetics", "chi_S1", p.chi_S1);
  set2("kinetics", "chi_S2", p.chi_S2);
  doc.set_scalar("kinetics", "l_S1", p.l_S1);
  doc.set_scalar("kinetics", "c_P_th", p.c_P_th);
  set2("kinetics", "eta_S", p.eta_S);
  doc.set_scalar("kinetics", "l_S2", p.l_S2);
  doc.set_scalar("kinetics", "l_S3", p.l_S3);
  doc.set_scalar("kinetics", "A_S", p.A_S);
  doc.set_scalar("kinetics", "B_S", p.B_S / units::mol_per_mm3_per_nM);
  doc.set_scalar("kinetics", "alpha", p.alpha_hill);
  doc.set_scalar("kinetics", "D_E", p.D_E);
  doc.set_scalar("kinetics", "eta_E", p.eta_E);
  doc.set_scalar("kinetics", "rho_E_eq", p.rho_E_eq);
  doc.set_scalar("kinetics", "A_E", p.A_E);
  doc.set_scalar("kinetics", "B_E", p.B_E / units::mol_per_mm3_per_nM);
  doc.set_scalar("kinetics", "beta", p.beta_hill);
  doc.set_scalar("kinetics", "eps_E", p.eps_E);
  doc.set_scalar("kinetics", "l_E", p.l_E);
  doc.set_scalar("kinetics", "rho_S_eq", p.rho_S_eq);
  doc.set_scalar("kinetics", "kappa_P", p.kappa_P);
  doc.set_scalar("kinetics", "c_C_eq", p.c_C_eq);

  set2("mechanics", "mu", p.mu);
  doc.set_scalar("mechanics", "Lambda", p.Lambda);
  set2("mechanics", "k1_bar", p.k1_bar);
  set2("mechanics", "k2", p.k2);
  set2("mechanics", "alpha_a",
       {p.alpha_a.media / units::rad_per_deg,
        p.alpha_a.adventitia / units::rad_per_deg});
  doc.set_scalar("mechanics", "theta_floor", p.theta_floor);

  doc.set_scalar("bc", "q_P_ref", p.q_P_ref / units::mol_per_fmol);
  doc.set_scalar("bc", "q_T_ref", p.q_T_ref / units::mol_per_fmol);
  doc.set_scalar("bc", "l_B", p.l_B);
  doc.set_scalar("bc", "eps_D2", p.eps_D2);
  doc.set_scalar("bc", "q_D_ref", p.release.q_D_ref / units::mol_per_fmol);
  doc.set_scalar("bc", "t_p", p.release.t_p);
  doc.set_scalar("bc", "t_c", p.release.t_c);

  doc.set_scalar("ic", "c_P_0", p.ic.c_P);
  doc.set_scalar("ic", "c_T_0", p.ic.c_T);
  doc.set_scalar("ic", "c_C_0", p.ic.c_C);
  doc.set_scalar("ic", "c_D_0", p.ic.c_D);
  doc.set_scalar("ic", "rho_S_0", p.ic.rho_S);
  doc.set_scalar("ic", "rho_E_healthy_0", p.ic.rho_E_healthy);
  doc.set_scalar("ic", "rho_E_denuded_0", p.ic.rho_E_denuded);

  return doc;
}

} // namespace isr
