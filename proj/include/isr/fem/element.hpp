#ifndef ISR_FEM_ELEMENT_HPP
#define ISR_FEM_ELEMENT_HPP

#include "isr/fem/shape.hpp"
#include "isr/kinetics.hpp"
#include "isr/mechanics.hpp"
#include "isr/mesh.hpp"
#include "isr/params.hpp"

#include <array>
#include <functional>

namespace isr {

/// Per-element referential geometry and material frames, fixed for the
/// lifetime of a mesh.
struct HexGeom {
  std::array<std::array<Vec3, 8>, Hex8::n_qp> G; ///< referential shape grads
  std::array<double, Hex8::n_qp> wdet;           ///< quadrature weight x detJ0
  std::array<Vec3, Hex8::n_qp> Xq;               ///< quadrature point position
  std::array<FiberFrame, Hex8::n_qp> frame;
  Layer layer = Layer::media;
};

/// Referential surface quadrature data: shape values, tangent-plane gradient
/// vectors and the area-weighted quadrature factor.
struct QuadGeom {
  std::array<std::array<double, 4>, Quad4::n_qp> N;
  std::array<std::array<Vec3, 4>, Quad4::n_qp> SG; ///< surface gradients
  std::array<double, Quad4::n_qp> wdA;
  SurfaceTag tag = SurfaceTag::exterior;
};

HexGeom build_hex_geom(const Mesh& mesh, Index elem, const ModelParams& p);
QuadGeom build_quad_geom(const Mesh& mesh, const Mesh::SurfQuad& quad);

/// Per-field options used by verification drivers; production runs keep the
/// defaults.
struct AssemblyOptions {
  bool steady = false;  ///< drop the time terms
  bool transport = true;
  bool mechanics = true;
  bool taxis = true;
  bool supg = true;
  bool boundary_fluxes = true;
  double perturb_tangent = 0.0; ///< test hook, scales the Jacobian
  std::function<double(int field, const Vec3&)> forcing; ///< manufactured source
};

/// Parametric shape values of the hex at its quadrature points (element
/// independent).
inline const std::array<std::array<double, 8>, Hex8::n_qp>& hex_shape_values() {
  static const auto table = [] {
    std::array<std::array<double, 8>, Hex8::n_qp> N;
    const auto qps = Hex8::gauss_points();
    for (int q = 0; q < Hex8::n_qp; ++q) N[q] = Hex8::shape(qps[q]);
    return N;
  }();
  return table;
}

inline double abs_value(double x) { return std::abs(x); }

template <typename Scalar>
Scalar abs_smooth(const Scalar& x) {
  return scalar_value(x) >= 0.0 ? x : Scalar(-x);
}

/// Monolithic residual of one bulk hex: quasistatic momentum plus the five
/// Lagrangian transport equations (backward Euler, SUPG on the SMC field).
/// Element dof ordering matches the global per-node layout,
/// [ux uy uz cP cT cC cD rS] x 8 nodes.
///
/// mass_prev holds J_prev * phi_prev per quadrature point and bulk field.
template <typename Scalar>
void bulk_element_residual(
    const HexGeom& geom, const Eigen::Matrix<Scalar, 64, 1>& xe,
    const std::array<std::array<double, n_bulk_fields>, Hex8::n_qp>& mass_prev,
    double dt, const ModelParams& p, const AssemblyOptions& opt,
    Eigen::Matrix<Scalar, 64, 1>& res) {
  using M3 = Mat3T<Scalar>;
  using V3 = Vec3T<Scalar>;
  res.setZero();
  const auto& Ntab = hex_shape_values();
  // ECM is secreted in place and the SMCs move by taxis only
  const double diffusivity[n_bulk_fields] = {p.D_P, p.D_T, 0.0, p.D_D, 0.0};

  for (int q = 0; q < Hex8::n_qp; ++q) {
    const auto& G = geom.G[q];
    const auto& N = Ntab[q];
    const double w = geom.wdet[q];

    // kinematics of the current iterate
    M3 F = M3::Identity();
    for (int a = 0; a < 8; ++a)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) F(i, j) += xe[a * 8 + i] * G[a][j];
    const Scalar J = F.determinant();
    if (scalar_value(J) <= 0.0)
      throw std::runtime_error("bulk element: non-positive Jacobian (mesh inversion)");
    const M3 C = (F.transpose() * F).eval();
    const M3 A = (J * C.inverse()).eval(); // J C^{-1}, the pulled-back mobility

    // field values and referential gradients
    Scalar phi[n_bulk_fields];
    V3 Gphi[n_bulk_fields];
    for (int f = 0; f < n_bulk_fields; ++f) {
      phi[f] = Scalar(0.0);
      Gphi[f].setZero();
      for (int a = 0; a < 8; ++a) {
        const Scalar v = xe[a * 8 + 3 + f];
        phi[f] += N[a] * v;
        for (int j = 0; j < 3; ++j) Gphi[f][j] += G[a][j] * v;
      }
    }

    if (opt.transport) {
      const auto rate = bulk_rates(phi[field_cP], phi[field_cT], phi[field_cC],
                                   phi[field_cD], phi[field_rS], geom.layer, p);

      // taxis flux of the SMC field, pulled back covariantly
      V3 a_hat = V3::Zero();
      Scalar rho_cl(0.0);
      if (opt.taxis) {
        const Scalar room = Scalar(1.0) - clamp0(phi[field_cC]) / p.c_C_th;
        const Scalar fS1 =
            sigmoid_drop(clamp0(phi[field_cP]), -p.l_S1, p.c_P_th);
        const double chi1 = p.chi_S1(geom.layer);
        const double chi2 = p.chi_S2(geom.layer);
        for (int j = 0; j < 3; ++j)
          a_hat[j] = chi1 * room * Gphi[field_cP][j] -
                     chi2 * fS1 * Gphi[field_cC][j];
        rho_cl = clamp0(phi[field_rS]);
      }
      const V3 a_tilde = (A * a_hat).eval(); // referential advective velocity

      for (int f = 0; f < n_bulk_fields; ++f) {
        const double D = diffusivity[f];
        V3 flux = V3::Zero();
        if (D > 0.0) flux = (D * (A * Gphi[f])).eval();
        if (f == field_rS && opt.taxis) flux -= rho_cl * a_tilde;

        for (int a = 0; a < 8; ++a) {
          Scalar r = Scalar(0.0);
          if (!opt.steady)
            r += N[a] * (J * phi[f] - mass_prev[q][f]) / dt;
          for (int j = 0; j < 3; ++j) r += G[a][j] * flux[j];
          r -= N[a] * J * rate[f];
          if (opt.forcing) r -= N[a] * J * opt.forcing(f, geom.Xq[q]);
          res[a * 8 + 3 + f] += w * r;
        }
      }

      // SUPG stabilization of the advection-dominated SMC equation
      if (opt.supg && opt.taxis) {
        Scalar denom(0.0);
        Scalar a2(0.0);
        for (int j = 0; j < 3; ++j) a2 += a_tilde[j] * a_tilde[j];
        if (scalar_value(a2) > 1e-60) {
          for (int a = 0; a < 8; ++a) {
            Scalar proj(0.0);
            for (int j = 0; j < 3; ++j) proj += a_tilde[j] * G[a][j];
            denom += abs_smooth(proj);
          }
          if (scalar_value(denom) > 0.0) {
            const Scalar tau = Scalar(1.0) / denom; // h/(2|a|) with coth limit
            Scalar strong = Scalar(0.0);
            if (!opt.steady)
              strong += (J * phi[field_rS] - mass_prev[q][field_rS]) / dt;
            for (int j = 0; j < 3; ++j)
              strong += a_tilde[j] * Gphi[field_rS][j];
            strong -= J * rate[field_rS];
            if (opt.forcing) strong -= J * opt.forcing(field_rS, geom.Xq[q]);
            for (int a = 0; a < 8; ++a) {
              Scalar proj(0.0);
              for (int j = 0; j < 3; ++j) proj += a_tilde[j] * G[a][j];
              res[a * 8 + 3 + field_rS] += w * tau * proj * strong;
            }
          }
        }
      }
    }

    if (opt.mechanics) {
      // growth stretch slaved to the referential SMC density of the iterate
      Scalar theta = J * clamp0(phi[field_rS]) / p.rho_S_eq;
      if (scalar_value(theta) < p.theta_floor) theta = Scalar(p.theta_floor);
      const Scalar c0C = J * clamp0(phi[field_cC]);
      const M3 S =
          pk2_stress_point(C, theta, c0C, geom.layer, geom.frame[q], p);
      const M3 P = (F * S).eval();
      for (int a = 0; a < 8; ++a)
        for (int i = 0; i < 3; ++i) {
          Scalar r(0.0);
          for (int j = 0; j < 3; ++j) r += P(i, j) * G[a][j];
          res[a * 8 + i] += w * r;
        }
    }
  }
}

/// Surface endothelium residual on one lumen quad (referential surface).
/// Element dofs: [rho_E x4, c_D x4].
template <typename Scalar>
void surface_ec_residual(const QuadGeom& geom,
                         const Eigen::Matrix<Scalar, 8, 1>& xe,
                         const std::array<double, 4>& rhoE_prev, double dt,
                         const ModelParams& p, const AssemblyOptions& opt,
                         Eigen::Matrix<Scalar, 8, 1>& res) {
  using V3 = Vec3T<Scalar>;
  res.setZero();
  for (int q = 0; q < Quad4::n_qp; ++q) {
    const auto& N = geom.N[q];
    const double w = geom.wdA[q];
    Scalar rhoE(0.0), rhoE_p(0.0), cD(0.0);
    V3 GrhoE = V3::Zero();
    for (int a = 0; a < 4; ++a) {
      rhoE += N[a] * xe[a];
      rhoE_p += N[a] * rhoE_prev[a];
      cD += N[a] * xe[4 + a];
      for (int j = 0; j < 3; ++j) GrhoE[j] += geom.SG[q][a][j] * xe[a];
    }
    const Scalar cD_nM = clamp0(cD) / units::mol_per_mm3_per_nM;
    const Scalar rate = ec_rate(rhoE, cD_nM, p);
    for (int a = 0; a < 4; ++a) {
      Scalar r(0.0);
      if (!opt.steady) r += N[a] * (rhoE - rhoE_p) / dt;
      for (int j = 0; j < 3; ++j) r += p.D_E * geom.SG[q][a][j] * GrhoE[j];
      r -= N[a] * rate;
      res[a] += w * r;
    }
  }
}

/// Prescribed-flux contributions of one lumen quad. On the endothelium the
/// growth-factor influxes are gated by the local EC density and the drug
/// loses mass to EC receptor binding; rows couple to [rho_E x4, c_D x4].
/// Row ordering: [cP x4, cT x4, cD x4].
template <typename Scalar>
void boundary_flux_residual(const QuadGeom& geom,
                            const Eigen::Matrix<Scalar, 8, 1>& xe, double t,
                            const ModelParams& p, const ReleaseProfile& release,
                            Eigen::Matrix<Scalar, 12, 1>& res) {
  res.setZero();
  if (geom.tag == SurfaceTag::gamma_ss) {
    const double qD = f_B2(t, release) * release.q_D_ref;
    for (int q = 0; q < Quad4::n_qp; ++q)
      for (int a = 0; a < 4; ++a)
        res[8 + a] -= Scalar(geom.N[q][a] * qD * geom.wdA[q]);
    return;
  }
  if (!is_endothelium(geom.tag))
    throw std::invalid_argument("boundary_flux_residual: quad carries no flux");

  const double ramp = f_B1(t, p.l_B);
  for (int q = 0; q < Quad4::n_qp; ++q) {
    const auto& N = geom.N[q];
    const double w = geom.wdA[q];
    Scalar rhoE(0.0), cD(0.0);
    for (int a = 0; a < 4; ++a) {
      rhoE += N[a] * xe[a];
      cD += N[a] * xe[4 + a];
    }
    const Scalar gate = ramp * gf_influx_gate(rhoE, p);
    const Scalar qP = gate * p.q_P_ref;
    const Scalar qT = gate * p.q_T_ref;
    const Scalar uptake = drug_uptake(rhoE, cD, p);
    for (int a = 0; a < 4; ++a) {
      res[a] -= w * N[a] * qP;
      res[4 + a] -= w * N[a] * qT;
      res[8 + a] += w * N[a] * uptake;
    }
  }
}

} // namespace isr

#endif
