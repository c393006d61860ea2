#include "isr/kinetics.hpp"

#include <doctest.h>

#include <random>

using namespace isr;

namespace {

ModelParams table_params() {
  return load_params(ConfigDoc::parse_string(R"(
[kinetics]
rho_S_eq = 3.16e3
kappa_P  = 5.0e21
[bc]
q_P_ref = 1.0e-3
q_T_ref = 1.0e-4
l_B     = 0.5
eps_D2  = 1.0e-4
q_D_ref = 10
t_p     = 10
t_c     = 2.5
)"));
}

// randomized positive states at physical magnitudes, away from the clamp
// kinks
struct StateSampler {
  std::mt19937 rng{1234};
  LocalState next() {
    std::uniform_real_distribution<double> u(0.1, 3.0);
    LocalState s;
    s.c_P = u(rng) * 1e-15;
    s.c_T = u(rng) * 1e-16;
    s.c_C = u(rng) * 2e-9;
    s.c_D = u(rng) * 2e-15;
    s.rho_S = u(rng) * 2e3;
    s.rho_E = u(rng) * 200;
    for (int i = 0; i < 3; ++i) {
      s.grad_c_P[i] = (u(rng) - 1.5) * 1e-15;
      s.grad_c_C[i] = (u(rng) - 1.5) * 1e-9;
    }
    return s;
  }
};

} // namespace

TEST_CASE("anti-inflammatory factor") {
  CHECK(f_P1(0.0, 1.0) == 1.0);
  CHECK(f_P1(1.0, 1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-12));
  CHECK(f_P1(1e6, 1.0) == doctest::Approx(0.0));
  CHECK(f_P1(1e9, 1.0) == 0.0); // overflow-guarded
}

TEST_CASE("sigmoid drop") {
  const double l = 1e16, th = 1e-16;
  CHECK(sigmoid_drop(th, l, th) == doctest::Approx(0.5));
  CHECK(sigmoid_drop(0.0, l, th) == doctest::Approx(1.0).epsilon(0.3));
  CHECK(sigmoid_drop(1e-13, l, th) == 0.0);  // saturated far above threshold
  CHECK(sigmoid_drop(-1e-13, l, th) == 1.0); // and far below
  // increasing variant via sign-flipped steepness
  CHECK(sigmoid_drop(1e-13, -l, th) == 1.0);
}

TEST_CASE("saturating ramp") {
  CHECK(saturation(0.0, 0.2) == 0.0);
  CHECK(saturation(5.0, 0.2) ==
        doctest::Approx(0.6321205588285577).epsilon(1e-12));
  CHECK(saturation(1e12, 0.2) == doctest::Approx(1.0));
}

TEST_CASE("hill complement") {
  const double A = 69.8, B = 2.2, n = 2.96;
  CHECK(hill_complement(0.0, A, B, n) == 1.0);
  CHECK(hill_complement(B, A, B, n) == doctest::Approx(0.651).epsilon(1e-12));
  CHECK(hill_complement(1e9, A, B, n) == doctest::Approx(0.302).epsilon(1e-6));
}

TEST_CASE("every scaling function maps into [0,1]") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double x = std::pow(10.0, -20.0 + 40.0 * u(rng));
    const double l = std::pow(10.0, -16.0 + 32.0 * u(rng));
    const double th = std::pow(10.0, -18.0 + 20.0 * u(rng));
    for (double v : {f_P1(x, l), sigmoid_drop(x, l, th), saturation(x, l),
                     hill_complement(x, 69.8, 2.2, 2.96),
                     hill_complement(x, 65.4, 9.19, 1.46)}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("dose monotonicity of the drug curves") {
  double prev_s4 = 2.0, prev_e1 = 2.0, prev_e2 = -1.0;
  for (double c = 0.0; c <= 60.0; c += 0.25) {
    const double s4 = hill_complement(c, 69.8, 2.2, 2.96);
    const double e1 = hill_complement(c, 65.4, 9.19, 1.46);
    const double e2 = saturation(c, 0.2);
    CHECK(s4 <= prev_s4 + 1e-15);
    CHECK(e1 <= prev_e1 + 1e-15);
    CHECK(e2 >= prev_e2 - 1e-15);
    prev_s4 = s4;
    prev_e1 = e1;
    prev_e2 = e2;
  }
}

TEST_CASE("reaction rate structure") {
  const ModelParams p = table_params();

  SUBCASE("zero TGF-beta shuts the PDGF source off") {
    LocalState s;
    s.c_T = 0.0;
    s.rho_S = p.rho_S_eq;
    const auto r = reaction_rates(s, Layer::media, p);
    CHECK(r.rate[field_cP] == 0.0);
  }

  SUBCASE("ECM at threshold shuts secretion and proliferation off") {
    LocalState s;
    s.c_C = p.c_C_th;
    s.rho_S = p.rho_S_eq;
    s.c_P = 0.0;
    const auto r = reaction_rates(s, Layer::media, p);
    CHECK(r.rate[field_cC] == doctest::Approx(0.0));
    CHECK(r.rate[field_rS] == doctest::Approx(0.0));
  }

  SUBCASE("drug-free PDGF source at homeostasis") {
    LocalState s;
    s.rho_S = p.rho_S_eq;
    s.c_T = 1e-16;
    s.c_D = 0.0;
    const auto r = reaction_rates(s, Layer::media, p); // r_eta = 0.5
    CHECK(r.rate[field_cP] ==
          doctest::Approx(p.eta_P * p.rho_S_eq * 1e-16).epsilon(1e-12));
  }

  SUBCASE("drug-free rates are independent of the secretion ratio") {
    StateSampler sampler;
    ConfigDoc doc = save_params(p);
    doc.set("kinetics", "r_eta", {"0.9", "0.3"});
    const ModelParams p2 = load_params(doc);
    for (int k = 0; k < 20; ++k) {
      LocalState s = sampler.next();
      s.c_D = 0.0;
      const auto r1 = reaction_rates(s, Layer::media, p);
      const auto r2 = reaction_rates(s, Layer::media, p2);
      CHECK(r1.rate[field_cP] == doctest::Approx(r2.rate[field_cP]));
      CHECK(r1.rate[field_rS] == doctest::Approx(r2.rate[field_rS]));
    }
  }

  SUBCASE("non-finite input is rejected") {
    LocalState s;
    s.c_P = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(reaction_rates(s, Layer::media, p), std::domain_error);
  }
}

TEST_CASE("analytic kinetics partials match finite differences") {
  const ModelParams p = table_params();
  StateSampler sampler;
  const double steps[n_bulk_fields] = {1e-22, 1e-23, 1e-16, 1e-22, 1e-4};

  for (int trial = 0; trial < 50; ++trial) {
    const LocalState s = sampler.next();
    for (Layer layer : {Layer::media, Layer::adventitia}) {
      const auto r = reaction_rates(s, layer, p);
      for (int j = 0; j < n_bulk_fields; ++j) {
        LocalState sp = s, sm = s;
        double* fields_p[] = {&sp.c_P, &sp.c_T, &sp.c_C, &sp.c_D, &sp.rho_S};
        double* fields_m[] = {&sm.c_P, &sm.c_T, &sm.c_C, &sm.c_D, &sm.rho_S};
        *fields_p[j] += steps[j];
        *fields_m[j] -= steps[j];
        const auto rp = reaction_rates(sp, layer, p);
        const auto rm = reaction_rates(sm, layer, p);
        for (int i = 0; i < n_bulk_fields; ++i) {
          const double fd = (rp.rate[i] - rm.rate[i]) / (2.0 * steps[j]);
          const double an = r.d_rate[i][j];
          const double scale = std::max(std::abs(fd), std::abs(an));
          if (scale < 1e-300) continue;
          CHECK(std::abs(fd - an) / scale < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("autodiff rates agree with the analytic partials") {
  using AD = Eigen::AutoDiffScalar<Eigen::Matrix<double, 5, 1>>;
  const ModelParams p = table_params();
  StateSampler sampler;
  for (int trial = 0; trial < 20; ++trial) {
    const LocalState s = sampler.next();
    AD v[5];
    const double vals[5] = {s.c_P, s.c_T, s.c_C, s.c_D, s.rho_S};
    for (int i = 0; i < 5; ++i) v[i] = AD(vals[i], 5, i);
    const auto rad = bulk_rates(v[0], v[1], v[2], v[3], v[4], Layer::media, p);
    const auto ran = reaction_rates(s, Layer::media, p);
    for (int i = 0; i < n_bulk_fields; ++i) {
      CHECK(rad[i].value() == doctest::Approx(ran.rate[i]).epsilon(1e-12));
      for (int j = 0; j < n_bulk_fields; ++j) {
        const double scale =
            std::max({std::abs(ran.d_rate[i][j]),
                      std::abs(rad[i].derivatives()[j]), 1e-300});
        if (scale == 1e-300) continue;
        CHECK(std::abs(rad[i].derivatives()[j] - ran.d_rate[i][j]) / scale <
              1e-10);
      }
    }
  }
}

TEST_CASE("EC rates") {
  const ModelParams p = table_params(); // eta_E = 0.1, rho_E_eq = 500
  CHECK(ec_rates(p.rho_E_eq, 0.0, p).rate == doctest::Approx(0.0));
  CHECK(ec_rates(0.0, 5.0, p).rate == 0.0);
  CHECK(ec_rates(p.rho_E_eq / 2, 0.0, p).rate ==
        doctest::Approx(12.5).epsilon(1e-12)); // eta_E rho_E_eq / 4

  // derivatives against finite differences
  for (double rho : {20.0, 250.0, 480.0}) {
    for (double dose : {0.5, 3.0, 12.0}) {
      const auto r = ec_rates(rho, dose, p);
      const double h1 = 1e-4, h2 = 1e-6;
      const double fd_rho = (ec_rates(rho + h1, dose, p).rate -
                             ec_rates(rho - h1, dose, p).rate) /
                            (2 * h1);
      const double fd_dose = (ec_rates(rho, dose + h2, p).rate -
                              ec_rates(rho, dose - h2, p).rate) /
                             (2 * h2);
      CHECK(r.d_rho_E == doctest::Approx(fd_rho).epsilon(1e-6));
      CHECK(r.d_c_D_nM == doctest::Approx(fd_dose).epsilon(1e-6));
    }
  }
}

TEST_CASE("taxis velocities") {
  const ModelParams p = table_params();
  LocalState s;
  s.rho_S = 1e3;
  s.c_P = 2e-15;
  s.c_C = 1e-9;

  SUBCASE("no PDGF gradient, no chemotaxis") {
    s.grad_c_C = Vec3(0, 0, 1e-9);
    const auto v = taxis_velocities(s, Layer::media, p);
    CHECK(v.v_S1.norm() == 0.0);
    CHECK(v.v_S2.norm() > 0.0);
  }
  SUBCASE("ECM saturation shuts chemotaxis off") {
    s.c_C = p.c_C_th;
    s.grad_c_P = Vec3(1e-15, 0, 0);
    const auto v = taxis_velocities(s, Layer::media, p);
    CHECK(v.v_S1.norm() == doctest::Approx(0.0));
  }
  SUBCASE("haptotaxis switches off below the PDGF threshold") {
    s.c_P = 1e-18; // far below c_P_th
    s.grad_c_C = Vec3(1e-9, 0, 0);
    const auto v = taxis_velocities(s, Layer::media, p);
    CHECK(v.v_S2.norm() < 1e-30 * p.chi_S2(Layer::media));
  }
  SUBCASE("chemotaxis moves up the PDGF gradient") {
    s.grad_c_P = Vec3(1e-15, 0, 0);
    const auto v = taxis_velocities(s, Layer::media, p);
    CHECK(v.v_S1[0] > 0.0);
  }
}

TEST_CASE("boundary flux profiles") {
  const ModelParams p = table_params();
  const ReleaseProfile rel = p.release; // t_p = 10, t_c = 2.5

  SUBCASE("zero at implantation time") {
    const auto q =
        boundary_fluxes(0.0, 0.0, 0.0, BoundaryRegion::endothelium, p, rel);
    CHECK(q.q_P == 0.0);
    CHECK(q.q_T == 0.0);
    const auto qs =
        boundary_fluxes(0.0, 0.0, 0.0, BoundaryRegion::stent, p, rel);
    CHECK(qs.q_D == 0.0);
  }
  SUBCASE("healthy endothelium gates the influx fully") {
    const auto q = boundary_fluxes(5.0, p.rho_E_eq, 0.0,
                                   BoundaryRegion::endothelium, p, rel);
    CHECK(q.q_P == doctest::Approx(0.0));
    CHECK(q.q_T == doctest::Approx(0.0));
  }
  SUBCASE("EC drug uptake is an outflux") {
    const auto q = boundary_fluxes(5.0, 100.0, 1e-15,
                                   BoundaryRegion::endothelium, p, rel);
    CHECK(q.q_D == doctest::Approx(-p.eps_D2 * 100.0 * 1e-15));
  }
  SUBCASE("release peak matches the closed form") {
    const double A = f_B3(rel);
    CHECK(A == doctest::Approx(543.4815003314424).epsilon(1e-12));
    const double t_star = rel.t_c * std::log(1.0 + A / rel.t_c);
    CHECK(t_star == doctest::Approx(13.465735902799727).epsilon(1e-12));
    // dense sampling around the peak
    double best_t = 0.0, best_f = -1.0;
    for (double t = 0.0; t <= 30.0; t += 1e-4) {
      const double f = f_B2(t, rel);
      if (f > best_f) {
        best_f = f;
        best_t = t;
      }
    }
    CHECK(best_t == doctest::Approx(t_star).epsilon(1e-4));
  }
  SUBCASE("cumulative release is finite and non-decreasing") {
    const double A = f_B3(rel);
    const double total = A * A / (A + rel.t_c);
    CHECK(f_B2_cumulative(1e9, rel) == doctest::Approx(total).epsilon(1e-9));
    // trapezoid cross-check of the closed-form cumulative
    double acc = 0.0, prev_cum = 0.0;
    const double h = 1e-3;
    for (double t = 0.0; t < 60.0; t += h) {
      acc += 0.5 * h * (f_B2(t, rel) + f_B2(t + h, rel));
      const double cum = f_B2_cumulative(t + h, rel);
      CHECK(cum >= prev_cum);
      prev_cum = cum;
    }
    CHECK(acc == doctest::Approx(f_B2_cumulative(60.0, rel)).epsilon(1e-7));
  }
}
