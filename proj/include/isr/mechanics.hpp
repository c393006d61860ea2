#ifndef ISR_MECHANICS_HPP
#define ISR_MECHANICS_HPP

#include "isr/kinetics.hpp"
#include "isr/params.hpp"
#include "isr/types.hpp"

#include <array>

namespace isr {

/// Referential collagen directions and the growth direction at a material
/// point. The growth direction is the unit normal of the fiber plane.
struct FiberFrame {
  Vec3 a01 = Vec3::UnitX();
  Vec3 a02 = Vec3::UnitX();
  Vec3 gamma = Vec3::UnitZ();
};

/// Builds the +/- alpha fiber helices in the circumferential-axial plane and
/// the radial growth direction. Throws if the basis is degenerate or the
/// fibers are parallel (alpha = 0 leaves the normal undefined).
FiberFrame build_fiber_frame(double alpha_rad, const Vec3& circumferential,
                             const Vec3& axial);

/// Growth stretch slaved to the referential SMC density, floored away from
/// zero to survive Newton transients.
inline double growth_stretch(double rho0_S, double rho_S_eq,
                             double theta_floor = 1.0e-6) {
  return std::max(std::max(rho0_S, 0.0) / rho_S_eq, theta_floor);
}

/// Per-quadrature-point state entering the constitutive evaluation.
struct QuadPointState {
  double theta = 1.0; ///< growth stretch
  double c0_C = 0.0;  ///< referential ECM concentration [mol/mm^3]
  Layer layer = Layer::media;
  FiberFrame frame;
};

/// Second Piola-Kirchhoff stress with consistent tangents and the free
/// energy density.
struct StressResult {
  Mat3 S = Mat3::Zero();           ///< [MPa]
  double dS_dC[3][3][3][3] = {};   ///< partial at fixed theta, c0_C
  Mat3 dS_dtheta = Mat3::Zero();
  Mat3 dS_dc0C = Mat3::Zero();
  double psi = 0.0;                ///< [MPa]
};

// ---------------------------------------------------------------------------
// Scalar-generic constitutive core (shared by the tangent-free evaluation,
// the closed-form tangents and the autodiff element kernels).
// ---------------------------------------------------------------------------

/// U_g^-1 = I - ((theta - 1)/theta) gamma (x) gamma.
template <typename Scalar>
Mat3T<Scalar> growth_stretch_inverse(const Scalar& theta, const Vec3& gamma) {
  Mat3T<Scalar> Ui = Mat3T<Scalar>::Identity();
  const Scalar coeff = (Scalar(1.0) / theta - Scalar(1.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Ui(i, j) += coeff * (gamma[i] * gamma[j]);
  return Ui;
}

/// Fiber stiffness scaled linearly by the ECM content of the grown
/// configuration, k1 = k1_bar (c0_C / theta) / c_C_eq (clamped below at 0).
template <typename Scalar>
Scalar fiber_stiffness_k1(const Scalar& theta, const Scalar& c0_C, Layer layer,
                          const ModelParams& p) {
  const Scalar c_bar = clamp0(c0_C) / theta;
  return p.k1_bar(layer) * c_bar / p.c_C_eq;
}

/// Free energy from the co-rotated elastic Cauchy-Green tensor: compressible
/// Neo-Hooke ground matrix plus exponential tension-only fiber response.
template <typename Scalar>
Scalar free_energy_core(const Mat3T<Scalar>& Cbar_e, const Scalar& k1,
                        Layer layer, const FiberFrame& frame,
                        const ModelParams& p) {
  using std::exp;
  using std::log;
  const double mu = p.mu(layer);
  const double k2 = p.k2(layer);
  const Scalar det = Cbar_e.determinant();
  if (scalar_value(det) <= 0.0)
    throw std::domain_error("free_energy: non-positive det(Cbar_e)");
  const Scalar logJe = Scalar(0.5) * log(det);
  Scalar psi = 0.5 * mu * (Cbar_e.trace() - Scalar(3.0)) - mu * logJe +
               0.25 * p.Lambda * (det - Scalar(1.0) - Scalar(2.0) * logJe);
  for (const Vec3& a : {frame.a01, frame.a02}) {
    const Scalar E = a.dot(Cbar_e * a) - Scalar(1.0);
    if (scalar_value(E) > 0.0)
      psi += k1 / (2.0 * k2) * (exp(k2 * E * E) - Scalar(1.0));
  }
  return psi;
}

/// 2 dpsi/dCbar_e in closed form.
template <typename Scalar>
Mat3T<Scalar> stress_core(const Mat3T<Scalar>& Cbar_e, const Scalar& k1,
                          Layer layer, const FiberFrame& frame,
                          const ModelParams& p) {
  using std::exp;
  const double mu = p.mu(layer);
  const double k2 = p.k2(layer);
  const Scalar det = Cbar_e.determinant();
  if (scalar_value(det) <= 0.0)
    throw std::domain_error("stress_core: non-positive det(Cbar_e)");
  const Mat3T<Scalar> Ci = Cbar_e.inverse();
  Mat3T<Scalar> S = mu * (Mat3T<Scalar>::Identity() - Ci) +
                    0.5 * p.Lambda * (det - Scalar(1.0)) * Ci;
  for (const Vec3& a : {frame.a01, frame.a02}) {
    const Scalar E = a.dot(Cbar_e * a) - Scalar(1.0);
    if (scalar_value(E) > 0.0) {
      const Scalar w = Scalar(2.0) * k1 * exp(k2 * E * E) * E;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) S(i, j) += w * (a[i] * a[j]);
    }
  }
  return S;
}

/// Full stress evaluation S = U_g^-1 Shat U_g^-1 for any scalar type, with
/// the growth stretch slaved to J rho_S / rho_S_eq upstream.
template <typename Scalar>
Mat3T<Scalar> pk2_stress_point(const Mat3T<Scalar>& C, const Scalar& theta,
                               const Scalar& c0_C, Layer layer,
                               const FiberFrame& frame, const ModelParams& p) {
  const Mat3T<Scalar> Ui = growth_stretch_inverse(theta, frame.gamma);
  const Mat3T<Scalar> Cbar_e = Ui * C * Ui;
  const Scalar k1 = fiber_stiffness_k1(theta, c0_C, layer, p);
  const Mat3T<Scalar> Shat = stress_core(Cbar_e, k1, layer, frame, p);
  return (Ui * Shat * Ui).eval();
}

// ---------------------------------------------------------------------------
// Point-value API with closed-form tangents.
// ---------------------------------------------------------------------------

/// Co-rotated elastic measures (Cbar_e, Jbar_e). Throws on non-SPD C.
std::pair<Mat3, double> elastic_measures(const Mat3& C,
                                         const QuadPointState& qp);

/// Free energy density at a material point.
double free_energy(const Mat3& Cbar_e, double Jbar_e, const QuadPointState& qp,
                   const ModelParams& p);

/// Stress and all constitutive tangents at a material point.
StressResult pk2_stress(const Mat3& C, const QuadPointState& qp,
                        const ModelParams& p);

/// dpsi/dc0_C, the conjugate of the referential ECM concentration.
double dpsi_dc0C(const Mat3& C, const QuadPointState& qp, const ModelParams& p);

/// Reduced dissipation with zero entropy source, and the minimal entropy
/// source required for consistency when collagen is being secreted.
struct DissipationResult {
  double D_red = 0.0;
  double R0_min = 0.0;
};

DissipationResult dissipation_check(const Mat3& C, const QuadPointState& qp,
                                    double theta_dot, double c0C_dot,
                                    const ModelParams& p);

} // namespace isr

#endif
