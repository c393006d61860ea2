#include "isr/mechanics.hpp"

#include <doctest.h>

#include <random>

using namespace isr;

namespace {

ModelParams mech_params() {
  return load_params(ConfigDoc::parse_string(R"(
[kinetics]
rho_S_eq = 3.16e3
kappa_P  = 5.0e21
[bc]
q_P_ref = 0
q_T_ref = 0
l_B     = 1
eps_D2  = 0
q_D_ref = 0
t_p     = 5
t_c     = 1
)"));
}

QuadPointState make_qp(const ModelParams& p, double theta, Layer layer) {
  QuadPointState qp;
  qp.layer = layer;
  qp.theta = theta;
  qp.c0_C = p.c_C_eq * theta; // homeostatic content in the grown volume
  qp.frame = build_fiber_frame(p.alpha_a(layer), Vec3::UnitX(), Vec3::UnitY());
  return qp;
}

Mat3 random_spd(std::mt19937& rng, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  Mat3 F = Mat3::Identity();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) F(i, j) += u(rng) + (i == j ? 0.05 : 0.0);
  return F.transpose() * F;
}

Mat3 sym_perturbation(int k, int l, double h) {
  Mat3 d = Mat3::Zero();
  d(k, l) += h;
  d(l, k) += h;
  return d;
}

} // namespace

TEST_CASE("fiber frame construction") {
  const double a41 = 41.0 * units::rad_per_deg;
  const FiberFrame f = build_fiber_frame(a41, Vec3::UnitX(), Vec3::UnitY());
  CHECK(f.a01.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.a02.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.gamma.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.a01.dot(f.a02) ==
        doctest::Approx(std::cos(2.0 * a41)).epsilon(1e-12));
  CHECK(std::abs(f.gamma.dot(f.a01)) < 1e-12);
  CHECK(std::abs(f.gamma.dot(f.a02)) < 1e-12);
  // gamma is parallel to a01 x a02
  CHECK(f.gamma.cross(f.a01.cross(f.a02)).norm() < 1e-12);

  CHECK_THROWS_AS(build_fiber_frame(0.0, Vec3::UnitX(), Vec3::UnitY()),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_fiber_frame(a41, Vec3::UnitX(), Vec3::UnitX()),
                  std::invalid_argument);
}

TEST_CASE("growth stretch and its map") {
  CHECK(growth_stretch(3.16e3, 3.16e3) == doctest::Approx(1.0));
  CHECK(growth_stretch(2 * 3.16e3, 3.16e3) == doctest::Approx(2.0));
  CHECK(growth_stretch(0.0, 3.16e3) == doctest::Approx(1e-6)); // floor

  const Vec3 g = Vec3(0.3, -0.5, 0.81).normalized();
  for (double theta : {0.4, 1.0, 1.7, 2.0}) {
    Mat3 Ug = Mat3::Identity() + (theta - 1.0) * g * g.transpose();
    CHECK(Ug.determinant() == doctest::Approx(theta).epsilon(1e-12));
    const Mat3 Ui = growth_stretch_inverse(theta, g);
    CHECK((Ug * Ui - Mat3::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("structural tensors are invariant under the growth map") {
  const ModelParams p = mech_params();
  for (Layer layer : {Layer::media, Layer::adventitia}) {
    const QuadPointState qp = make_qp(p, 1.73, layer);
    const Mat3 Ug =
        Mat3::Identity() +
        (qp.theta - 1.0) * qp.frame.gamma * qp.frame.gamma.transpose();
    for (const Vec3& a : {qp.frame.a01, qp.frame.a02}) {
      const Mat3 H = a * a.transpose();
      CHECK((Ug * H * Ug - H).norm() < 1e-12);
    }
  }
}

TEST_CASE("elastic measures") {
  const ModelParams p = mech_params();
  const QuadPointState qp1 = make_qp(p, 1.0, Layer::media);
  auto [Cbar1, Je1] = elastic_measures(Mat3::Identity(), qp1);
  CHECK((Cbar1 - Mat3::Identity()).norm() < 1e-14);
  CHECK(Je1 == doctest::Approx(1.0));

  // a purely grown state is elastically unloaded
  const QuadPointState qp2 = make_qp(p, 1.6, Layer::media);
  const Mat3 Ug = Mat3::Identity() +
                  0.6 * qp2.frame.gamma * qp2.frame.gamma.transpose();
  auto [Cbar2, Je2] = elastic_measures(Ug * Ug, qp2);
  CHECK((Cbar2 - Mat3::Identity()).norm() < 1e-12);
  CHECK(Je2 == doctest::Approx(1.0).epsilon(1e-12));

  // det Cbar_e = det C / theta^2
  std::mt19937 rng(3);
  const Mat3 C = random_spd(rng, 0.2);
  auto [Cbar3, Je3] = elastic_measures(C, qp2);
  CHECK(Cbar3.determinant() ==
        doctest::Approx(C.determinant() / (1.6 * 1.6)).epsilon(1e-12));

  CHECK_THROWS_AS(elastic_measures(-Mat3::Identity(), qp1), std::domain_error);
}

TEST_CASE("free energy basics") {
  const ModelParams p = mech_params();
  const QuadPointState qp = make_qp(p, 1.0, Layer::media);
  CHECK(free_energy(Mat3::Identity(), 1.0, qp, p) == doctest::Approx(0.0));

  // compression along the fibers leaves only the isotropic part
  Mat3 C = Mat3::Identity();
  C(0, 0) = 0.8; // circumferential compression shortens both helices
  C(1, 1) = 0.9;
  auto [Cbar, Je] = elastic_measures(C, qp);
  const double psi = free_energy(Cbar, Je, qp, p);
  const double mu = p.mu(Layer::media);
  const double det = Cbar.determinant();
  const double psi_iso = 0.5 * mu * (Cbar.trace() - 3.0) -
                         0.5 * mu * std::log(det) +
                         0.25 * p.Lambda * (det - 1.0 - std::log(det));
  CHECK(psi == doctest::Approx(psi_iso).epsilon(1e-12));

  // k1 scales linearly with the ECM content of the grown configuration
  CHECK(fiber_stiffness_k1(1.0, p.c_C_eq / 2, Layer::media, p) ==
        doctest::Approx(p.k1_bar(Layer::media) / 2).epsilon(1e-12));

  CHECK_THROWS_AS(free_energy(-Mat3::Identity(), 1.0, qp, p),
                  std::domain_error);
}

TEST_CASE("stress-free reference and grown states") {
  const ModelParams p = mech_params();
  for (double theta : {1.0, 1.4, 2.0}) {
    for (Layer layer : {Layer::media, Layer::adventitia}) {
      const QuadPointState qp = make_qp(p, theta, layer);
      const Mat3 Ug = Mat3::Identity() +
                      (theta - 1.0) * qp.frame.gamma * qp.frame.gamma.transpose();
      const StressResult s = pk2_stress(Ug * Ug, qp, p);
      CHECK(s.S.norm() < 1e-12);
      CHECK(s.psi == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("stress depends on the deformation only through C") {
  const ModelParams p = mech_params();
  const QuadPointState qp = make_qp(p, 1.3, Layer::media);
  std::mt19937 rng(11);
  const Mat3 C = random_spd(rng, 0.25);
  // a rotated deformation gradient produces the same C, hence the same S
  const Eigen::AngleAxisd R(0.7, Vec3(1, 2, -1).normalized());
  Eigen::LLT<Mat3> llt(C);
  const Mat3 F = llt.matrixL();
  const Mat3 FR = R.toRotationMatrix() * F;
  const Mat3 C2 = FR.transpose() * FR;
  const StressResult s1 = pk2_stress(C, qp, p);
  const StressResult s2 = pk2_stress(C2, qp, p);
  CHECK((s1.S - s2.S).norm() / s1.S.norm() < 1e-10);
}

TEST_CASE("stress equals twice the energy gradient") {
  const ModelParams p = mech_params();
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const double theta = 1.0 + 0.2 * trial / 10.0;
    const QuadPointState qp =
        make_qp(p, theta, trial % 2 ? Layer::media : Layer::adventitia);
    const Mat3 C = random_spd(rng, 0.2);
    const StressResult s = pk2_stress(C, qp, p);

    const double h = 1e-6;
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) {
        const Mat3 dC = sym_perturbation(k, l, h);
        auto psi_at = [&](const Mat3& Cx) {
          auto [Cb, Je] = elastic_measures(Cx, qp);
          return free_energy(Cb, Je, qp, p);
        };
        const double fd = (psi_at(C + dC) - psi_at(C - dC)) / (2.0 * h);
        double an = 0.0; // S : dC / (2h) restores d psi in the dC direction
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) an += 0.5 * s.S(i, j) * dC(i, j) / h;
        CHECK(fd == doctest::Approx(an).epsilon(1e-6));
      }
  }
}

TEST_CASE("constitutive tangents match finite differences") {
  const ModelParams p = mech_params();
  std::mt19937 rng(17);
  for (int trial = 0; trial < 8; ++trial) {
    const double theta = 0.9 + 0.15 * trial;
    const QuadPointState qp =
        make_qp(p, theta, trial % 2 ? Layer::media : Layer::adventitia);
    const Mat3 C = random_spd(rng, 0.2);
    const StressResult s = pk2_stress(C, qp, p);

    SUBCASE("") {} // keep each trial in one doctest context

    // dS/dC against symmetric perturbations
    const double h = 1e-6;
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) {
        const Mat3 dC = sym_perturbation(k, l, h);
        const Mat3 fd =
            (pk2_stress(C + dC, qp, p).S - pk2_stress(C - dC, qp, p).S) /
            (2.0 * h);
        Mat3 an = Mat3::Zero();
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double v = 0.0;
            for (int c = 0; c < 3; ++c)
              for (int d = 0; d < 3; ++d)
                v += s.dS_dC[i][j][c][d] * dC(c, d) / h;
            an(i, j) = v;
          }
        CHECK((fd - an).norm() / std::max(an.norm(), 1e-12) < 1e-6);
      }

    // dS/dtheta
    {
      const double ht = 1e-7;
      QuadPointState qp_p = qp, qp_m = qp;
      qp_p.theta += ht;
      qp_m.theta -= ht;
      const Mat3 fd =
          (pk2_stress(C, qp_p, p).S - pk2_stress(C, qp_m, p).S) / (2.0 * ht);
      CHECK((fd - s.dS_dtheta).norm() /
                std::max(s.dS_dtheta.norm(), 1e-12) <
            1e-5);
    }

    // dS/dc0_C
    {
      const double hc = 1e-6 * p.c_C_eq;
      QuadPointState qp_p = qp, qp_m = qp;
      qp_p.c0_C += hc;
      qp_m.c0_C -= hc;
      const Mat3 fd =
          (pk2_stress(C, qp_p, p).S - pk2_stress(C, qp_m, p).S) / (2.0 * hc);
      const double scale = std::max(s.dS_dc0C.norm(), 1e-30);
      CHECK((fd - s.dS_dc0C).norm() / scale < 1e-5);
    }
  }
}

TEST_CASE("major symmetry of the material tangent") {
  const ModelParams p = mech_params();
  std::mt19937 rng(23);
  const QuadPointState qp = make_qp(p, 1.2, Layer::media);
  const Mat3 C = random_spd(rng, 0.2);
  const StressResult s = pk2_stress(C, qp, p);
  CHECK((s.S - s.S.transpose()).norm() < 1e-14);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          CHECK(s.dS_dC[i][j][k][l] ==
                doctest::Approx(s.dS_dC[k][l][i][j]).epsilon(1e-10));
}

TEST_CASE("autodiff stress agrees with the closed-form stress") {
  using AD = Eigen::AutoDiffScalar<Eigen::Matrix<double, 2, 1>>;
  const ModelParams p = mech_params();
  std::mt19937 rng(31);
  const QuadPointState qp = make_qp(p, 1.25, Layer::media);
  const Mat3 C = random_spd(rng, 0.2);

  Mat3T<AD> Cad;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Cad(i, j) = AD(C(i, j));
  AD theta(qp.theta, 2, 0);
  AD c0C(qp.c0_C, 2, 1);
  const Mat3T<AD> Sad =
      pk2_stress_point(Cad, theta, c0C, qp.layer, qp.frame, p);
  const StressResult s = pk2_stress(C, qp, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(Sad(i, j).value() == doctest::Approx(s.S(i, j)).epsilon(1e-12));
      CHECK(Sad(i, j).derivatives()[0] ==
            doctest::Approx(s.dS_dtheta(i, j)).epsilon(1e-9));
      CHECK(Sad(i, j).derivatives()[1] ==
            doctest::Approx(s.dS_dc0C(i, j)).epsilon(1e-9));
    }
}

TEST_CASE("reduced dissipation") {
  const ModelParams p = mech_params();
  std::mt19937 rng(41);
  const QuadPointState qp = make_qp(p, 1.3, Layer::media);
  const Mat3 C = random_spd(rng, 0.25);

  const auto d0 = dissipation_check(C, qp, 0.1, 0.0, p);
  CHECK(d0.D_red == 0.0);
  CHECK(d0.R0_min == 0.0);

  // collagen degradation is dissipative without any entropy source
  const auto dm = dissipation_check(C, qp, 0.1, -1e-10, p);
  CHECK(dm.D_red >= 0.0);
  CHECK(dm.R0_min == 0.0);

  // collagen secretion requires a non-negative entropy source
  const auto dp = dissipation_check(C, qp, 0.1, +1e-10, p);
  CHECK(dp.R0_min >= 0.0);
  CHECK(dp.R0_min == doctest::Approx(dpsi_dc0C(C, qp, p) * 1e-10));

  // conjugate force against finite differences of the free energy
  const double h = 1e-6 * p.c_C_eq;
  QuadPointState qp_p = qp, qp_m = qp;
  qp_p.c0_C += h;
  qp_m.c0_C -= h;
  auto psi_of = [&](const QuadPointState& q) {
    auto [Cb, Je] = elastic_measures(C, q);
    return free_energy(Cb, Je, q, p);
  };
  const double fd = (psi_of(qp_p) - psi_of(qp_m)) / (2.0 * h);
  CHECK(dpsi_dc0C(C, qp, p) == doctest::Approx(fd).epsilon(1e-6));
}
