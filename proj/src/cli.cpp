#include "isr/cli.hpp"

#include "isr/driver.hpp"
#include "isr/kinetics.hpp"
#include "isr/mechanics.hpp"
#include "isr/verify/mms.hpp"
#include "isr/verify/oracle.hpp"
#include "isr/verify/sweep.hpp"
#include "isr/verify/tangents.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace isr {

namespace {

void dump_curve(const std::string& dir, const std::string& name,
                const std::string& xlabel,
                const std::vector<std::pair<double, double>>& xy) {
  std::ofstream out(dir + "/" + name + ".csv");
  if (!out) throw std::runtime_error("curves: cannot open output in " + dir);
  out.precision(12);
  out << xlabel << "," << name << "\n";
  for (const auto& [x, y] : xy) out << x << "," << y << "\n";
}

int cmd_curves(const std::string& function, const std::string& dir, double t_p,
               double t_c) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  // published table values
  const double l_P1 = 1.0, l_S2 = 1e-7, A_S = 69.8, B_S = 2.2, alpha = 2.96;
  const double A_E = 65.4, B_E = 9.19, beta = 1.46, l_E = 0.2, l_B = 0.5;
  ReleaseProfile rel{1.0, t_p, t_c};

  auto grid = [](double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
  };
  auto want = [&](const char* name) {
    return function == "all" || function == name;
  };

  std::vector<std::pair<double, double>> xy;
  if (want("fP1")) {
    xy.clear();
    for (double c : grid(0, 10, 201)) xy.emplace_back(c, f_P1(c, l_P1));
    dump_curve(dir, "fP1", "c_D_nM", xy);
  }
  if (want("fS2")) {
    xy.clear();
    for (double c : grid(0, 1e8, 201)) xy.emplace_back(c, saturation(c, l_S2));
    dump_curve(dir, "fS2", "c_P_ng_per_ml", xy);
  }
  if (want("fS4")) {
    xy.clear();
    for (double c : grid(0, 50, 201))
      xy.emplace_back(c, hill_complement(c, A_S, B_S, alpha));
    dump_curve(dir, "fS4", "c_D_nM", xy);
  }
  if (want("fE1")) {
    xy.clear();
    for (double c : grid(0, 50, 201))
      xy.emplace_back(c, hill_complement(c, A_E, B_E, beta));
    dump_curve(dir, "fE1", "c_D_nM", xy);
  }
  if (want("fE2")) {
    xy.clear();
    for (double c : grid(0, 50, 201)) xy.emplace_back(c, saturation(c, l_E));
    dump_curve(dir, "fE2", "c_D_nM", xy);
  }
  if (want("fB1")) {
    xy.clear();
    for (double t : grid(0, 30, 301)) xy.emplace_back(t, f_B1(t, l_B));
    dump_curve(dir, "fB1", "t_day", xy);
  }
  if (want("fB2")) {
    xy.clear();
    std::vector<std::pair<double, double>> cum;
    for (double t : grid(0, 60, 601)) {
      xy.emplace_back(t, f_B2(t, rel));
      cum.emplace_back(t, f_B2_cumulative(t, rel));
    }
    dump_curve(dir, "fB2", "t_day", xy);
    dump_curve(dir, "fB2_cumulative", "t_day", cum);
  }
  std::cout << "curves written to " << dir << "\n";
  return 0;
}

int cmd_mech_path(const std::string& dir, double alpha_deg, double theta,
                  double lambda_max, int n) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  ConfigDoc doc = ConfigDoc::parse_string(
      "[kinetics]\nrho_S_eq = 1e3\nkappa_P = 5e21\n"
      "[bc]\nq_P_ref=0\nq_T_ref=0\nq_D_ref=0\nl_B=1\neps_D2=0\nt_p=5\nt_c=1\n");
  const ModelParams p = load_params(doc);

  QuadPointState qp;
  qp.layer = Layer::media;
  qp.frame = build_fiber_frame(alpha_deg * units::rad_per_deg, Vec3::UnitX(),
                               Vec3::UnitY());
  qp.theta = theta;
  qp.c0_C = p.c_C_eq;

  std::ofstream out(dir + "/mech_path.csv");
  out.precision(12);
  out << "lambda,S_11,S_22,S_33,S_12,psi\n";
  for (int i = 0; i < n; ++i) {
    const double lam = 1.0 + (lambda_max - 1.0) * i / (n - 1);
    Mat3 F = Mat3::Identity();
    F(0, 0) = lam; // stretch along the mean fiber direction
    const Mat3 C = F.transpose() * F;
    const StressResult s = pk2_stress(C, qp, p);
    out << lam << "," << s.S(0, 0) << "," << s.S(1, 1) << "," << s.S(2, 2)
        << "," << s.S(0, 1) << "," << s.psi << "\n";
  }
  std::cout << "stress path written to " << dir << "/mech_path.csv\n";
  return 0;
}

} // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"coupled bulk-surface in-stent restenosis simulator"};
  app.require_subcommand(1);

  // run
  std::string config_path, restart_path;
  auto* run_cmd = app.add_subcommand("run", "run a simulation from a config");
  run_cmd->add_option("config", config_path, "configuration file")->required();
  run_cmd->add_option("--restart", restart_path, "checkpoint to resume from");
  run_cmd->callback([&]() {
    Problem prob = setup_problem(ConfigDoc::parse_file(config_path));
    run_problem(prob, restart_path, &std::cout);
    std::cout << "outputs in " << prob.out.dir << "\n";
  });

  // mesh generate / check
  auto* mesh_cmd = app.add_subcommand("mesh", "mesh utilities");
  mesh_cmd->require_subcommand(1);
  std::string mesh_config, mesh_out = "quadrant.mesh", mesh_file;
  auto* gen = mesh_cmd->add_subcommand("generate", "generate the stented quadrant");
  gen->add_option("config", mesh_config, "configuration file with [mesh]");
  gen->add_option("-o,--output", mesh_out, "output mesh file");
  gen->callback([&]() {
    QuadrantSpec spec;
    if (!mesh_config.empty()) {
      const ConfigDoc doc = ConfigDoc::parse_file(mesh_config);
      spec.length = doc.get_scalar("mesh", "l", spec.length);
      spec.lumen_radius = doc.get_scalar("mesh", "r", spec.lumen_radius);
      spec.t_media = doc.get_scalar("mesh", "t_m", spec.t_media);
      spec.t_adventitia = doc.get_scalar("mesh", "t_a", spec.t_adventitia);
      spec.n_z = doc.get_int("mesh", "n_z", spec.n_z);
      spec.n_theta = doc.get_int("mesh", "n_theta", spec.n_theta);
      spec.n_r_layer = doc.get_int("mesh", "n_r", spec.n_r_layer);
      if (doc.has("mesh", "stent_band")) {
        const auto band = doc.get_values("mesh", "stent_band");
        spec.stent_z0 = band.at(0);
        spec.stent_z1 = band.at(1);
      }
      spec.denuded_len = doc.get_scalar("mesh", "denuded_len", spec.denuded_len);
    }
    const Mesh mesh = generate_quadrant(spec);
    check_mesh(mesh);
    export_mesh(mesh, mesh_out);
    std::cout << "mesh: " << mesh.n_nodes() << " nodes, " << mesh.n_hexes()
              << " hexes, " << mesh.quads.size() << " boundary quads -> "
              << mesh_out << "\n";
  });
  auto* chk = mesh_cmd->add_subcommand("check", "validate a mesh file");
  chk->add_option("file", mesh_file, "mesh file")->required();
  chk->callback([&]() {
    const Mesh mesh = import_mesh(mesh_file);
    std::cout << "mesh ok: " << mesh.n_nodes() << " nodes, " << mesh.n_hexes()
              << " hexes, volume " << mesh_volume(mesh) << " mm^3, lumen area "
              << tagged_area(mesh, SurfaceTag::gamma_ss) +
                     tagged_area(mesh, SurfaceTag::gamma_e_d) +
                     tagged_area(mesh, SurfaceTag::gamma_e_h)
              << " mm^2\n";
  });

  // sweep
  std::string sweep_config, sweep_dir = "sweep_out";
  auto* sweep_cmd =
      app.add_subcommand("sweep", "parameter study over a config grid");
  sweep_cmd->add_option("config", sweep_config, "config with a [sweep] section")
      ->required();
  sweep_cmd->add_option("-o,--output", sweep_dir, "output directory");
  sweep_cmd->callback([&]() {
    const ConfigDoc doc = ConfigDoc::parse_file(sweep_config);
    const auto runs = sweep(sweep_spec_from_config(doc), doc);
    write_sweep_csv(runs, sweep_dir);
    for (const auto& r : runs)
      std::cout << "value " << r.value
                << (r.ok ? " final_theta " + std::to_string(r.final_theta)
                         : " FAILED: " + r.error)
                << "\n";
  });

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "independent numerical audits");
  verify_cmd->require_subcommand(1);
  auto* vode = verify_cmd->add_subcommand(
      "ode", "single-hex FEM against the 0D Runge-Kutta oracle");
  double ode_dt = 1e-3, ode_tend = 30.0;
  vode->add_option("--dt", ode_dt, "backward-Euler step [day]");
  vode->add_option("--t-end", ode_tend, "horizon [day]");
  vode->callback([&]() {
    const OracleComparison cmp = compare_single_hex_to_ode(ode_dt, ode_tend);
    std::cout << cmp.table << "max relative deviation " << cmp.worst << "\n";
    if (cmp.worst >= 1e-6) throw CLI::RuntimeError("ode deviation >= 1e-6", 1);
  });
  auto* vmms = verify_cmd->add_subcommand("mms", "manufactured-solution orders");
  vmms->callback([&]() {
    MmsCase diffusion;
    const MmsResult r1 = mms_run(diffusion);
    std::cout << "diffusion-reaction\n" << r1.table;
    MmsCase taxis;
    taxis.taxis = true;
    const MmsResult r2 = mms_run(taxis);
    std::cout << "taxis + SUPG\n" << r2.table;
  });
  auto* vtan = verify_cmd->add_subcommand(
      "tangents", "finite-difference audit of the monolithic Jacobian");
  vtan->callback([&]() {
    ConfigDoc doc = oracle_config();
    doc.set("mesh", "nx", {"2"});
    doc.set("bc", "displacement", {"minimal"});
    doc.set("bc", "q_P_ref", {"1e-3"});
    doc.set("bc", "q_T_ref", {"1e-4"});
    doc.set("bc", "q_D_ref", {"1e-2"});
    doc.set("bc", "eps_D2", {"1e-4"});
    Problem prob = setup_problem(doc);
    Assembler assembler(prob.mesh, prob.dofs, prob.params);
    VecX x = initial_state(prob.mesh, prob.dofs, prob.params);
    // spatially varied, strictly interior state
    for (Index n = 0; n < prob.dofs.n_nodes(); ++n) {
      const double s = 0.1 * std::sin(3.0 * prob.mesh.nodes[n].sum());
      for (int c = 0; c < 3; ++c)
        if (!prob.dofs.fixed[prob.dofs.dof(n, c)])
          x[prob.dofs.dof(n, c)] = 0.02 * s * (c + 1);
      for (int f = 0; f < n_bulk_fields; ++f)
        x[prob.dofs.dof(n, 3 + f)] *= 1.0 + 0.2 * s;
    }
    for (Index n : prob.mesh.endothelium_nodes())
      x[prob.dofs.dof_rE(n)] *=
          1.0 + 0.1 * std::cos(2.0 * prob.mesh.nodes[n].sum());
    const StepCache cache = assembler.make_step_cache(
        initial_state(prob.mesh, prob.dofs, prob.params));
    const TangentCheck check = check_monolithic_tangent(
        assembler, x, cache, 0.5, 0.5, AssemblyOptions{});
    std::cout << check.report << "max relative tangent error "
              << check.max_rel_err << "\n";
    if (check.max_rel_err >= 1e-5)
      throw CLI::RuntimeError("tangent error >= 1e-5", 1);
  });

  // curves
  std::string fn = "all", curve_dir = "curves_out";
  double tp = 10.0, tc = 2.5;
  auto* curves_cmd =
      app.add_subcommand("curves", "dose/time response curves as CSV");
  curves_cmd->add_option("--function", fn,
                         "all|fP1|fS2|fS4|fE1|fE2|fB1|fB2");
  curves_cmd->add_option("-o,--output", curve_dir, "output directory");
  curves_cmd->add_option("--t_p", tp, "release time-to-peak [day]");
  curves_cmd->add_option("--t_c", tc, "release curvature constant [day]");
  curves_cmd->callback([&]() { cmd_curves(fn, curve_dir, tp, tc); });

  // mech-path
  std::string mech_dir = "mech_out";
  double alpha_deg = 41.0, theta_g = 1.0, lam_max = 1.3;
  auto* mech_cmd = app.add_subcommand(
      "mech-path", "single-point stress response along a stretch path");
  mech_cmd->add_option("-o,--output", mech_dir, "output directory");
  mech_cmd->add_option("--alpha", alpha_deg, "fiber angle [deg]");
  mech_cmd->add_option("--theta", theta_g, "growth stretch");
  mech_cmd->add_option("--lambda-max", lam_max, "final stretch");
  mech_cmd->callback(
      [&]() { cmd_mech_path(mech_dir, alpha_deg, theta_g, lam_max, 61); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace isr
