#include "isr/params.hpp"
#include "isr/units.hpp"

#include <doctest.h>

using namespace isr;

namespace {

// minimal document carrying only the keys without a published value
const char* base_doc = R"(
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
)";

ModelParams base_params() {
  return load_params(ConfigDoc::parse_string(base_doc));
}

} // namespace

TEST_CASE("drug concentration conversion") {
  CHECK(convert_drug_to_nM(0.0) == 0.0);
  CHECK(convert_drug_to_nM(2.2e-15) == doctest::Approx(2.2).epsilon(1e-12));
  CHECK(convert_drug_to_nM(1.0e-14) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(convert_drug_to_nM(-1.0e-16), std::domain_error);
}

TEST_CASE("round trip nM <-> mol/mm^3 is exact to machine precision") {
  for (double nm : {0.031, 2.2, 9.19, 147.0}) {
    const double internal = units::nM_to_mol_per_mm3(nm);
    CHECK(convert_drug_to_nM(internal) ==
          doctest::Approx(nm).epsilon(4e-16));
  }
}

TEST_CASE("published defaults survive loading") {
  const ModelParams p = base_params();
  CHECK(p.eta_P == doctest::Approx(1.0e-6));
  CHECK(p.A_S == doctest::Approx(69.8));
  CHECK(p.B_S == doctest::Approx(2.2e-15)); // 2.2 nM internally in mol/mm^3
  CHECK(p.alpha_hill == doctest::Approx(2.96));
  CHECK(p.D_P == doctest::Approx(0.1));
  CHECK(p.c_C_th == doctest::Approx(7.0007e-9));
  CHECK(p.r_eta.media == doctest::Approx(0.5));
  CHECK(p.r_eta.adventitia == doctest::Approx(0.0));
  CHECK(p.mu.media == doctest::Approx(0.02));
  CHECK(p.mu.adventitia == doctest::Approx(0.008));
  CHECK(p.alpha_a.media == doctest::Approx(41.0 * units::rad_per_deg));
  CHECK(p.rho_E_eq == doctest::Approx(500.0));
  CHECK(p.B_E == doctest::Approx(9.19e-15));
  // c_C_eq defaults to the collagen saturation threshold
  CHECK(p.c_C_eq == doctest::Approx(p.c_C_th));
  // flux reference converted from fmol
  CHECK(p.release.q_D_ref == doctest::Approx(10e-15));
}

TEST_CASE("missing required keys are rejected") {
  ConfigDoc doc = ConfigDoc::parse_string(base_doc);
  SUBCASE("rho_S_eq") {
    ConfigDoc d = ConfigDoc::parse_string(
        "[kinetics]\nkappa_P = 1e21\n[bc]\nq_P_ref=0\nq_T_ref=0\nl_B=1\n"
        "eps_D2=0\nq_D_ref=0\nt_p=5\nt_c=1\n");
    CHECK_THROWS_WITH_AS(load_params(d),
                         doctest::Contains("rho_S_eq"), std::runtime_error);
  }
  SUBCASE("q_D_ref") {
    ConfigDoc d = ConfigDoc::parse_string(
        "[kinetics]\nrho_S_eq = 1e3\nkappa_P = 1e21\n[bc]\nq_P_ref=0\n"
        "q_T_ref=0\nl_B=1\neps_D2=0\nt_p=5\nt_c=1\n");
    CHECK_THROWS_WITH_AS(load_params(d),
                         doctest::Contains("q_D_ref"), std::runtime_error);
  }
}

TEST_CASE("range violations are rejected") {
  ConfigDoc doc = ConfigDoc::parse_string(base_doc);
  doc.set("kinetics", "r_eta", {"1.5"});
  CHECK_THROWS_WITH_AS(load_params(doc), doctest::Contains("r_eta"),
                       std::runtime_error);

  ConfigDoc doc2 = ConfigDoc::parse_string(base_doc);
  doc2.set("kinetics", "A_S", {"120"});
  CHECK_THROWS_AS(load_params(doc2), std::runtime_error);

  ConfigDoc doc3 = ConfigDoc::parse_string(base_doc);
  doc3.set("kinetics", "D_P", {"-0.5"});
  CHECK_THROWS_AS(load_params(doc3), std::runtime_error);
}

TEST_CASE("unknown keys in owned sections are rejected") {
  ConfigDoc doc = ConfigDoc::parse_string(base_doc);
  doc.set("kinetics", "eta_Q", {"1.0"});
  CHECK_THROWS_WITH_AS(load_params(doc), doctest::Contains("eta_Q"),
                       std::runtime_error);
}

TEST_CASE("load / save round trip is idempotent") {
  const ModelParams p1 = base_params();
  const std::string text1 = save_params(p1).serialize();
  const ModelParams p2 = load_params(ConfigDoc::parse_string(text1));
  const std::string text2 = save_params(p2).serialize();
  CHECK(text1 == text2);
  CHECK(p1.eta_P == p2.eta_P);
  CHECK(p1.B_S == p2.B_S);
  CHECK(p1.release.q_D_ref == p2.release.q_D_ref);
  CHECK(p1.alpha_a.media == p2.alpha_a.media);
}

TEST_CASE("per-layer lookup never falls through") {
  ConfigDoc doc = ConfigDoc::parse_string(base_doc);
  doc.set("kinetics", "eta_S", {"0.111", "0.222"});
  doc.set("kinetics", "chi_S1", {"1.0e3", "2.0e3"});
  doc.set("mechanics", "mu", {"0.013", "0.017"});
  const ModelParams p = load_params(doc);
  CHECK(p.eta_S(Layer::media) == doctest::Approx(0.111));
  CHECK(p.eta_S(Layer::adventitia) == doctest::Approx(0.222));
  CHECK(p.chi_S1(Layer::media) == doctest::Approx(1.0e3));
  CHECK(p.chi_S1(Layer::adventitia) == doctest::Approx(2.0e3));
  CHECK(p.mu(Layer::media) == doctest::Approx(0.013));
  CHECK(p.mu(Layer::adventitia) == doctest::Approx(0.017));
}

TEST_CASE("release profile must decay") {
  ConfigDoc doc = ConfigDoc::parse_string(base_doc);
  doc.set("bc", "t_p", {"0.1"});
  doc.set("bc", "t_c", {"5.0"}); // t_p exp(t_p/t_c) < t_c: growing profile
  CHECK_THROWS_AS(load_params(doc), std::runtime_error);
}
