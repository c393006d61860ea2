#ifndef ISR_KINETICS_HPP
#define ISR_KINETICS_HPP

#include "isr/params.hpp"
#include "isr/types.hpp"
#include "isr/units.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <array>
#include <cmath>
#include <type_traits>

namespace isr {

// ---------------------------------------------------------------------------
// Scalar-generic building blocks. These accept double or an autodiff scalar
// (including autodiff expression types, which are materialized on entry) so
// element kernels can differentiate through every curve. Negative transients
// from Newton iterates are clamped to zero before any dose/threshold curve
// is evaluated; the clamp carries a zero derivative on the negative side.
// ---------------------------------------------------------------------------

template <typename T>
struct plain_ad {
  using type = T;
};
template <typename D>
struct plain_ad<Eigen::AutoDiffScalar<D>> {
  using type = Eigen::AutoDiffScalar<
      typename Eigen::internal::remove_all<D>::type::PlainObject>;
};
template <typename T>
using plain_ad_t = typename plain_ad<std::decay_t<T>>::type;

inline double scalar_value(double x) { return x; }
template <typename T>
double scalar_value(const T& x) {
  return scalar_value(x.value());
}

template <typename T>
plain_ad_t<T> clamp0(const T& x_in) {
  using S = plain_ad_t<T>;
  S x = x_in;
  return scalar_value(x) >= 0.0 ? x : S(0.0);
}

namespace detail {
inline constexpr double exp_guard = 700.0;

inline double pow_pos(double x, double n) {
  return x > 0.0 ? std::pow(x, n) : 0.0;
}
template <typename D>
plain_ad_t<Eigen::AutoDiffScalar<D>> pow_pos(const Eigen::AutoDiffScalar<D>& x,
                                             double n) {
  using S = plain_ad_t<Eigen::AutoDiffScalar<D>>;
  const double v = scalar_value(x);
  if (v <= 0.0) return S(0.0);
  return S(std::pow(v, n), x.derivatives() * (n * std::pow(v, n - 1.0)));
}
} // namespace detail

/// Dose-dependent anti-inflammatory factor exp(-l_P1 c_D), c_D in nM.
template <typename T>
plain_ad_t<T> f_P1(const T& c_D_nM, double l_P1) {
  using S = plain_ad_t<T>;
  using std::exp;
  const S arg = -l_P1 * clamp0(c_D_nM);
  if (scalar_value(arg) < -detail::exp_guard) return S(0.0);
  return exp(arg);
}

/// Decreasing sigmoid 1/(1 + exp(l (x - x_th))). Pass a negative l for the
/// increasing variant. Saturates cleanly once the exponent would overflow.
template <typename T>
plain_ad_t<T> sigmoid_drop(const T& x_in, double l, double x_th) {
  using S = plain_ad_t<T>;
  using std::exp;
  const S x = x_in;
  const S arg = l * (x - x_th);
  const double a = scalar_value(arg);
  if (a > detail::exp_guard) return S(0.0);
  if (a < -detail::exp_guard) return S(1.0);
  return S(1.0) / (S(1.0) + exp(arg));
}

/// Saturating ramp 1 - exp(-l x) on x >= 0.
template <typename T>
plain_ad_t<T> saturation(const T& x_in, double l) {
  using S = plain_ad_t<T>;
  using std::exp;
  const S arg = -l * clamp0(x_in);
  if (scalar_value(arg) < -detail::exp_guard) return S(1.0);
  return S(1.0) - exp(arg);
}

/// Complement of a Hill curve: 1 - (A/100) c^n / (c^n + B^n); doses in nM.
template <typename T>
plain_ad_t<T> hill_complement(const T& c_nM, double A, double B_nM, double n) {
  using S = plain_ad_t<T>;
  const S c = clamp0(c_nM);
  const S cn = detail::pow_pos(c, n);
  const double Bn = std::pow(B_nM, n);
  return S(1.0) - (A / 100.0) * cn / (cn + Bn);
}

/// Growth-factor influx ramp f_B1(t) = 1 - exp(-l_B t).
inline double f_B1(double t, double l_B) { return saturation(t, l_B); }

/// Decay constant of the drug release curve, t_p exp(t_p/t_c) - t_c.
inline double f_B3(const ReleaseProfile& r) {
  return r.t_p * std::exp(r.t_p / r.t_c) - r.t_c;
}

/// Drug influx shape f_B2(t) = exp(-t/f_B3) (1 - exp(-t/t_c)).
inline double f_B2(double t, const ReleaseProfile& r) {
  return std::exp(-t / f_B3(r)) * (1.0 - std::exp(-t / r.t_c));
}

/// Closed-form integral of f_B2 over [0, t]; the total release is
/// f_B3^2 / (f_B3 + t_c).
inline double f_B2_cumulative(double t, const ReleaseProfile& r) {
  const double A = f_B3(r);
  const double k = 1.0 / A + 1.0 / r.t_c;
  return A * (1.0 - std::exp(-t / A)) - (1.0 - std::exp(-k * t)) / k;
}

// ---------------------------------------------------------------------------
// Reaction terms. Fields are in the internal unit system; the drug enters the
// dose-response curves in nM and PDGF enters the proliferation saturation in
// ng/ml through the configured bridge kappa_P.
// ---------------------------------------------------------------------------

/// Net reaction rates (source - sink) of the five bulk fields at one point.
template <typename Scalar>
std::array<Scalar, n_bulk_fields> bulk_rates(const Scalar& c_P_in,
                                             const Scalar& c_T_in,
                                             const Scalar& c_C_in,
                                             const Scalar& c_D_in,
                                             const Scalar& rho_S_in, Layer layer,
                                             const ModelParams& p) {
  const Scalar c_P = clamp0(c_P_in);
  const Scalar c_T = clamp0(c_T_in);
  const Scalar c_C = clamp0(c_C_in);
  const Scalar c_D = clamp0(c_D_in);
  const Scalar rho_S = clamp0(rho_S_in);

  const Scalar c_D_nM = c_D / units::mol_per_mm3_per_nM;
  const double r = p.r_eta(layer);

  const Scalar fP1 = f_P1(c_D_nM, p.l_P1);
  const Scalar fP2 = sigmoid_drop(c_T, p.l_P2, p.c_T_th);
  const Scalar fS2 = saturation(p.kappa_P * c_P, p.l_S2);
  const Scalar fS3 = sigmoid_drop(c_T, p.l_S3, p.c_T_th);
  const Scalar fS4 = hill_complement(
      c_D_nM, p.A_S, p.B_S / units::mol_per_mm3_per_nM, p.alpha_hill);
  const Scalar ecm_room = Scalar(1.0) - c_C / p.c_C_th;

  std::array<Scalar, n_bulk_fields> rate;
  rate[field_cP] = ((1.0 - r) + r * fP1) * p.eta_P * rho_S * c_T -
                   p.eps_P * fP2 * rho_S * c_P;
  rate[field_cT] = -p.eps_T * rho_S * c_T;
  rate[field_cC] = p.eta_C * rho_S * ecm_room - p.eps_C * c_P * c_C;
  rate[field_cD] = -p.eps_D1 * rho_S * c_D;
  rate[field_rS] = p.eta_S(layer) * fS2 * fS3 * fS4 * rho_S * ecm_room;
  return rate;
}

/// Net endothelial rate: logistic proliferation damped by the drug plus
/// dose-exacerbated apoptosis. c_D is passed in nM.
template <typename T>
plain_ad_t<T> ec_rate(const T& rho_E_in, const T& c_D_nM_in,
                      const ModelParams& p) {
  using S = plain_ad_t<T>;
  const S rho_E = clamp0(rho_E_in);
  const S c_D_nM = c_D_nM_in;
  const S fE1 = hill_complement(c_D_nM, p.A_E,
                                p.B_E / units::mol_per_mm3_per_nM, p.beta_hill);
  const S fE2 = saturation(c_D_nM, p.l_E);
  return p.eta_E * fE1 * rho_E * (S(1.0) - rho_E / p.rho_E_eq) -
         p.eps_E * fE2 * rho_E;
}

/// Endothelium gating of the growth-factor influxes, (1 - rho_E/rho_E_eq).
template <typename T>
plain_ad_t<T> gf_influx_gate(const T& rho_E, const ModelParams& p) {
  using S = plain_ad_t<T>;
  return S(1.0) - clamp0(rho_E) / p.rho_E_eq;
}

/// Outward drug loss to EC receptor binding, eps_D2 rho_E c_D (enters as a
/// negative influx on the endothelium).
template <typename T>
plain_ad_t<T> drug_uptake(const T& rho_E, const T& c_D, const ModelParams& p) {
  using S = plain_ad_t<T>;
  return S(p.eps_D2 * clamp0(rho_E) * clamp0(c_D));
}

// ---------------------------------------------------------------------------
// Point-value API with analytic partial derivatives.
// ---------------------------------------------------------------------------

/// Field values and spatial gradients at one bulk point.
struct LocalState {
  double c_P = 0.0, c_T = 0.0, c_C = 0.0, c_D = 0.0; ///< [mol/mm^3]
  double rho_S = 0.0;                                ///< [cells/mm^3]
  double rho_E = 0.0;      ///< [cells/mm^2], surface points only
  Vec3 grad_c_P = Vec3::Zero(); ///< [mol/mm^4]
  Vec3 grad_c_C = Vec3::Zero();
};

/// Net rates of the five bulk fields and their partials with respect to
/// every bulk field (row: rate, column: field).
struct ReactionRates {
  std::array<double, n_bulk_fields> rate{};
  std::array<std::array<double, n_bulk_fields>, n_bulk_fields> d_rate{};
};

ReactionRates reaction_rates(const LocalState& state, Layer layer,
                             const ModelParams& p);

/// EC net rate and its derivatives (with respect to rho_E and to the nM
/// drug dose).
struct EcRates {
  double rate = 0.0;
  double d_rho_E = 0.0;
  double d_c_D_nM = 0.0;
};

EcRates ec_rates(double rho_E, double c_D_nM, const ModelParams& p);

/// Pseudoadvective chemotaxis and haptotaxis velocities. These carry the
/// cell density, i.e. they are the advective SMC fluxes divided into the
/// up-PDGF and down-ECM contributions.
struct TaxisVelocities {
  Vec3 v_S1 = Vec3::Zero();
  Vec3 v_S2 = Vec3::Zero();
};

TaxisVelocities taxis_velocities(const LocalState& state, Layer layer,
                                 const ModelParams& p);

/// Boundary region kinds distinguished by the flux conditions.
enum class BoundaryRegion { endothelium, stent, other };

/// Prescribed boundary influxes per unit current area (positive into the
/// wall). q_D on the endothelium is the (negative) receptor-uptake flux.
struct BoundaryFluxes {
  double q_P = 0.0;
  double q_T = 0.0;
  double q_D = 0.0;
};

BoundaryFluxes boundary_fluxes(double t, double rho_E, double c_D,
                               BoundaryRegion region, const ModelParams& p,
                               const ReleaseProfile& release);

} // namespace isr

#endif
