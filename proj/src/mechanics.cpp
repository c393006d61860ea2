#include "isr/mechanics.hpp"

#include <Eigen/Cholesky>

#include <stdexcept>

namespace isr {

namespace {

void require_spd(const Mat3& C, const char* where) {
  if (!C.isApprox(C.transpose(), 1e-10))
    throw std::domain_error(std::string(where) + ": C not symmetric");
  Eigen::LLT<Mat3> llt(C);
  if (llt.info() != Eigen::Success)
    throw std::domain_error(std::string(where) + ": C not positive definite");
}

// Activated fiber contributions at a given Cbar_e.
struct FiberTerms {
  std::array<double, 2> E{};
  std::array<double, 2> q{};      // exp(k2 E^2) E  (Macaulay)
  std::array<double, 2> dq{};     // d q / d E, zero at and below the kink
  std::array<Vec3, 2> dir{};
};

FiberTerms fiber_terms(const Mat3& Cbar_e, const QuadPointState& qp,
                       const ModelParams& p) {
  FiberTerms f;
  f.dir = {qp.frame.a01, qp.frame.a02};
  const double k2 = p.k2(qp.layer);
  for (int i = 0; i < 2; ++i) {
    const Vec3& a = f.dir[i];
    const double E = a.dot(Cbar_e * a) - 1.0;
    f.E[i] = E;
    if (E > 0.0) {
      const double e = std::exp(k2 * E * E);
      f.q[i] = e * E;
      f.dq[i] = e * (1.0 + 2.0 * k2 * E * E);
    }
  }
  return f;
}

} // namespace

FiberFrame build_fiber_frame(double alpha_rad, const Vec3& circumferential,
                             const Vec3& axial) {
  const double tol = 1e-8;
  if (std::abs(circumferential.norm() - 1.0) > tol ||
      std::abs(axial.norm() - 1.0) > tol ||
      std::abs(circumferential.dot(axial)) > tol)
    throw std::invalid_argument("build_fiber_frame: basis not orthonormal");
  const double c = std::cos(alpha_rad), s = std::sin(alpha_rad);
  FiberFrame f;
  f.a01 = (c * circumferential + s * axial).normalized();
  f.a02 = (c * circumferential - s * axial).normalized();
  const Vec3 n = f.a01.cross(f.a02);
  if (n.norm() < tol)
    throw std::invalid_argument(
        "build_fiber_frame: parallel fibers leave the growth direction "
        "undefined");
  f.gamma = -n.normalized(); // radial for a right-handed (circ, axial) pair
  return f;
}

std::pair<Mat3, double> elastic_measures(const Mat3& C,
                                         const QuadPointState& qp) {
  require_spd(C, "elastic_measures");
  const Mat3 Ui = growth_stretch_inverse(qp.theta, qp.frame.gamma);
  const Mat3 Cbar_e = Ui * C * Ui;
  return {Cbar_e, std::sqrt(Cbar_e.determinant())};
}

double free_energy(const Mat3& Cbar_e, double Jbar_e, const QuadPointState& qp,
                   const ModelParams& p) {
  if (!(Jbar_e > 0.0))
    throw std::domain_error("free_energy: non-positive Jbar_e");
  const double k1 = fiber_stiffness_k1(qp.theta, qp.c0_C, qp.layer, p);
  return free_energy_core(Cbar_e, k1, qp.layer, qp.frame, p);
}

StressResult pk2_stress(const Mat3& C, const QuadPointState& qp,
                        const ModelParams& p) {
  require_spd(C, "pk2_stress");
  const double theta = qp.theta;
  const Vec3& g = qp.frame.gamma;
  const Mat3 P = g * g.transpose();
  const Mat3 Ui = growth_stretch_inverse(theta, g);
  const Mat3 Cbar_e = Ui * C * Ui;

  const double mu = p.mu(qp.layer);
  const double k1 = fiber_stiffness_k1(theta, qp.c0_C, qp.layer, p);
  const double det = Cbar_e.determinant();
  if (det <= 0.0) throw std::domain_error("pk2_stress: inverted elastic state");
  const Mat3 Ci = Cbar_e.inverse();
  const FiberTerms fib = fiber_terms(Cbar_e, qp, p);

  // Shat = 2 dpsi/dCbar_e
  Mat3 Shat = mu * (Mat3::Identity() - Ci) + 0.5 * p.Lambda * (det - 1.0) * Ci;
  Mat3 Hsum_q = Mat3::Zero(); // sum q_i a_i (x) a_i
  for (int i = 0; i < 2; ++i)
    Hsum_q += fib.q[i] * fib.dir[i] * fib.dir[i].transpose();
  Shat += 2.0 * k1 * Hsum_q;

  StressResult out;
  out.S = Ui * Shat * Ui;
  out.psi = free_energy_core(Cbar_e, k1, qp.layer, qp.frame, p);

  // dShat/dCbar_e, then pushed through U_g^-1 on all four legs.
  const double c_inv = -mu + 0.5 * p.Lambda * (det - 1.0);
  double dShat[3][3][3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          double v = -0.5 * c_inv * (Ci(a, c) * Ci(b, d) + Ci(a, d) * Ci(b, c));
          v += 0.5 * p.Lambda * det * Ci(a, b) * Ci(c, d);
          for (int i = 0; i < 2; ++i)
            if (fib.dq[i] != 0.0) {
              const Vec3& n = fib.dir[i];
              v += 2.0 * k1 * fib.dq[i] * n[a] * n[b] * n[c] * n[d];
            }
          dShat[a][b][c][d] = v;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double v = 0.0;
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
              for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                  v += Ui(i, a) * Ui(j, b) * dShat[a][b][c][d] * Ui(c, k) *
                       Ui(d, l);
          out.dS_dC[i][j][k][l] = v;
        }

  // dS/dtheta: U_g^-1 varies, Cbar_e varies through it, and k1 carries the
  // dilution of the referential ECM content.
  const Mat3 A = -(1.0 / (theta * theta)) * P;
  const Mat3 dCbar = A * C * Ui + Ui * C * A;
  Mat3 dShat_theta = Mat3::Zero();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double v = 0.0;
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) v += dShat[a][b][c][d] * dCbar(c, d);
      dShat_theta(a, b) = v;
    }
  const double dk1_dtheta = -k1 / theta;
  dShat_theta += 2.0 * dk1_dtheta * Hsum_q;
  out.dS_dtheta = A * Shat * Ui + Ui * Shat * A + Ui * dShat_theta * Ui;

  // dS/dc0_C through k1 only.
  const double dk1_dc0C =
      (qp.c0_C >= 0.0 ? p.k1_bar(qp.layer) / (p.c_C_eq * theta) : 0.0);
  out.dS_dc0C = Ui * (2.0 * dk1_dc0C * Hsum_q) * Ui;

  return out;
}

double dpsi_dc0C(const Mat3& C, const QuadPointState& qp,
                 const ModelParams& p) {
  const Mat3 Ui = growth_stretch_inverse(qp.theta, qp.frame.gamma);
  const Mat3 Cbar_e = Ui * C * Ui;
  const double k2 = p.k2(qp.layer);
  const FiberTerms fib = fiber_terms(Cbar_e, qp, p);
  double psi_ani_over_k1 = 0.0;
  for (int i = 0; i < 2; ++i)
    if (fib.E[i] > 0.0)
      psi_ani_over_k1 +=
          (std::exp(k2 * fib.E[i] * fib.E[i]) - 1.0) / (2.0 * k2);
  const double dk1 =
      (qp.c0_C >= 0.0 ? p.k1_bar(qp.layer) / (p.c_C_eq * qp.theta) : 0.0);
  return psi_ani_over_k1 * dk1;
}

DissipationResult dissipation_check(const Mat3& C, const QuadPointState& qp,
                                    double /*theta_dot*/, double c0C_dot,
                                    const ModelParams& p) {
  // With the prescribed transversely isotropic growth map the Mandel/back
  // stress contributions cancel and only the ECM-conjugate term survives.
  const double conj = dpsi_dc0C(C, qp, p);
  DissipationResult out;
  out.D_red = -conj * c0C_dot;
  out.R0_min = std::max(0.0, conj * c0C_dot);
  return out;
}

} // namespace isr
