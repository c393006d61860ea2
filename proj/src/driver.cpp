#include "isr/driver.hpp"

#include "isr/fem/assembler.hpp"
#include "isr/io/csv.hpp"
#include "isr/io/hash.hpp"
#include "isr/io/manifest.hpp"
#include "isr/io/vtk.hpp"

#include <filesystem>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace isr {

namespace {

Mesh mesh_from_config(const ConfigDoc& doc) {
  const std::string source = doc.get_string("mesh", "source", "quadrant");
  if (source == "file")
    return import_mesh(doc.get_string("mesh", "file", ""));
  if (source == "box") {
    const int nx = doc.get_int("mesh", "nx", 1);
    const int ny = doc.get_int("mesh", "ny", 1);
    const int nz = doc.get_int("mesh", "nz", 1);
    const double lx = doc.get_scalar("mesh", "lx", 1.0);
    const double ly = doc.get_scalar("mesh", "ly", 1.0);
    const double lz = doc.get_scalar("mesh", "lz", 1.0);
    const std::string lumen = doc.get_string("mesh", "lumen_z0", "none");
    std::function<SurfaceTag(int, const Vec3&)> tagger;
    if (lumen == "healthy")
      tagger = [](int axis, const Vec3&) {
        return axis == 2 ? SurfaceTag::gamma_e_h : SurfaceTag::exterior;
      };
    else if (lumen == "denuded")
      tagger = [](int axis, const Vec3&) {
        return axis == 2 ? SurfaceTag::gamma_e_d : SurfaceTag::exterior;
      };
    else if (lumen != "none")
      throw std::runtime_error("mesh: lumen_z0 must be healthy|denuded|none");
    return make_box(nx, ny, nz, lx, ly, lz, tagger);
  }
  if (source != "quadrant")
    throw std::runtime_error("mesh: source must be quadrant|box|file");

  QuadrantSpec spec;
  spec.length = doc.get_scalar("mesh", "l", spec.length);
  spec.lumen_radius = doc.get_scalar("mesh", "r", spec.lumen_radius);
  spec.t_media = doc.get_scalar("mesh", "t_m", spec.t_media);
  spec.t_adventitia = doc.get_scalar("mesh", "t_a", spec.t_adventitia);
  spec.n_z = doc.get_int("mesh", "n_z", spec.n_z);
  spec.n_theta = doc.get_int("mesh", "n_theta", spec.n_theta);
  spec.n_r_layer = doc.get_int("mesh", "n_r", spec.n_r_layer);
  if (doc.has("mesh", "stent_band")) {
    const auto band = doc.get_values("mesh", "stent_band");
    if (band.size() != 2)
      throw std::runtime_error("mesh: stent_band expects two values");
    spec.stent_z0 = band[0];
    spec.stent_z1 = band[1];
  }
  spec.denuded_len = doc.get_scalar("mesh", "denuded_len", spec.denuded_len);
  return generate_quadrant(spec);
}

void fix_set(DofMap& dofs, const Mesh& mesh, const std::string& set,
             std::initializer_list<int> comps) {
  const auto it = mesh.nodesets.find(set);
  if (it == mesh.nodesets.end())
    throw std::runtime_error("displacement bc: mesh has no nodeset '" + set +
                             "'");
  for (Index n : it->second)
    for (int c : comps) dofs.fix(dofs.dof(n, c), 0.0);
}

void apply_displacement_bc(const ConfigDoc& doc, const Mesh& mesh,
                           DofMap& dofs) {
  const std::string mode = doc.get_string("bc", "displacement", "quadrant");
  if (mode == "none") return;
  if (mode == "fix_all") {
    for (Index n = 0; n < dofs.n_nodes(); ++n)
      for (int c = 0; c < 3; ++c) dofs.fix(dofs.dof(n, c), 0.0);
    return;
  }
  if (mode == "minimal") {
    // 3-2-1 rigid-body suppression on corner nodes nearest to the axes
    auto nearest = [&](const Vec3& X) {
      Index best = 0;
      double bd = std::numeric_limits<double>::max();
      for (Index n = 0; n < mesh.n_nodes(); ++n) {
        const double d = (mesh.nodes[n] - X).squaredNorm();
        if (d < bd) {
          bd = d;
          best = n;
        }
      }
      return best;
    };
    Vec3 lo = mesh.nodes[0], hi = mesh.nodes[0];
    for (const auto& X : mesh.nodes) {
      lo = lo.cwiseMin(X);
      hi = hi.cwiseMax(X);
    }
    const Index n0 = nearest(lo);
    const Index nx = nearest(Vec3(hi[0], lo[1], lo[2]));
    const Index ny = nearest(Vec3(lo[0], hi[1], lo[2]));
    for (int c = 0; c < 3; ++c) dofs.fix(dofs.dof(n0, c), 0.0);
    dofs.fix(dofs.dof(nx, comp_uy), 0.0);
    dofs.fix(dofs.dof(nx, comp_uz), 0.0);
    dofs.fix(dofs.dof(ny, comp_uz), 0.0);
    return;
  }
  if (mode != "quadrant")
    throw std::runtime_error(
        "bc: displacement must be quadrant|fix_all|minimal|none");

  // symmetry planes, fixed ends, abluminal tether
  fix_set(dofs, mesh, "theta0", {comp_uy});
  fix_set(dofs, mesh, "theta1", {comp_ux});
  fix_set(dofs, mesh, "z0", {comp_uz});
  fix_set(dofs, mesh, "z1", {comp_uz});
  fix_set(dofs, mesh, "abluminal", {comp_ux, comp_uy});
  if (doc.get_bool("bc", "fix_stent_surface", true) &&
      mesh.nodesets.count("stent"))
    fix_set(dofs, mesh, "stent", {comp_ux, comp_uy, comp_uz});
}

} // namespace

Problem setup_problem(const ConfigDoc& doc) {
  Problem prob;
  prob.mesh = mesh_from_config(doc);
  prob.params = load_params(doc);
  prob.dofs = DofMap(prob.mesh);
  apply_displacement_bc(doc, prob.mesh, prob.dofs);

  prob.solver.dt = doc.get_scalar("solver", "dt", 1.0);
  prob.solver.t_end = doc.get_scalar("solver", "t_end", 30.0);
  prob.solver.newton_rel = doc.get_scalar("solver", "newton_rel", 1e-8);
  prob.solver.newton_abs = doc.get_scalar("solver", "newton_abs", 1e-10);
  prob.solver.newton_max_iter = doc.get_int("solver", "max_iter", 25);
  prob.solver.line_search = doc.get_bool("solver", "line_search", true);
  const std::string mode = doc.get_string("solver", "mode", "monolithic");
  if (mode == "staggered")
    prob.solver.mode = SolverConfig::Mode::staggered;
  else if (mode != "monolithic")
    throw std::runtime_error("solver: mode must be monolithic|staggered");

  prob.out.dir = doc.get_string("output", "dir", "out");
  prob.out.vtk_every = doc.get_int("output", "vtk_every", 0);
  prob.out.series_every = doc.get_int("output", "series_every", 1);
  prob.out.checkpoint_every = doc.get_int("output", "checkpoint_every", 0);
  if (doc.has("output", "probe")) {
    const auto v = doc.get_values("output", "probe");
    if (v.size() != 3) throw std::runtime_error("output: probe expects x y z");
    prob.out.probe = Vec3(v[0], v[1], v[2]);
    prob.out.probe_set = true;
  } else if (doc.get_string("mesh", "source", "quadrant") == "quadrant") {
    // default probe: luminal node at the downstream stent edge, theta = 0
    QuadrantSpec spec;
    const double z1 = doc.has("mesh", "stent_band")
                          ? doc.get_values("mesh", "stent_band")[1]
                          : spec.stent_z1;
    const double r = doc.get_scalar("mesh", "r", spec.lumen_radius);
    prob.out.probe = Vec3(r, 0.0, z1);
    prob.out.probe_set = true;
  }

  prob.config_text = doc.serialize();
  prob.params_hash = fnv1a(save_params(prob.params).serialize());
  std::ostringstream meshsig;
  meshsig << prob.mesh.n_nodes() << ":" << prob.mesh.n_hexes() << ":"
          << prob.mesh.quads.size();
  for (const auto& X : prob.mesh.nodes) meshsig << "," << X[0] << X[1] << X[2];
  prob.mesh_hash = fnv1a(meshsig.str());
  return prob;
}

SimulationState run_problem(Problem& prob, const std::string& restart_path,
                            std::ostream* log) {
  namespace fs = std::filesystem;
  fs::create_directories(prob.out.dir);

  Assembler assembler(prob.mesh, prob.dofs, prob.params);
  SimulationState state =
      restart_path.empty()
          ? make_initial_state(assembler)
          : read_checkpoint(restart_path, prob.mesh_hash, prob.params_hash);

  std::unique_ptr<TimeseriesWriter> series;
  if (prob.out.probe_set && prob.out.series_every > 0) {
    Probe probe = resolve_probe(prob.mesh, prob.out.probe);
    series = std::make_unique<TimeseriesWriter>(
        prob.out.dir + "/probe.csv", probe);
    if (restart_path.empty()) series->append(state, assembler);
  }

  SolverConfig cfg = prob.solver;
  cfg.log = log;
  StepCallback cb = [&](const SimulationState& s, const Assembler& a) {
    if (series && s.step % prob.out.series_every == 0) series->append(s, a);
    if (prob.out.vtk_every > 0 && s.step % prob.out.vtk_every == 0) {
      std::ostringstream name;
      name << prob.out.dir << "/state_" << s.step << ".vtk";
      write_vtk(prob.mesh, prob.dofs, s.x, s.theta_qp, name.str());
    }
    if (prob.out.checkpoint_every > 0 &&
        s.step % prob.out.checkpoint_every == 0) {
      std::ostringstream name;
      name << prob.out.dir << "/ckpt_" << s.step << ".bin";
      write_checkpoint(s, prob.mesh_hash, prob.params_hash, name.str());
    }
  };

  SimulationState final_state = run(assembler, cfg, std::move(state), cb);

  write_checkpoint(final_state, prob.mesh_hash, prob.params_hash,
                   prob.out.dir + "/final.bin");
  write_vtk(prob.mesh, prob.dofs, final_state.x, final_state.theta_qp,
            prob.out.dir + "/final.vtk");
  if (prob.mesh.nodesets.count("lumen"))
    write_profile_csv(neointima_profile(prob.mesh, prob.dofs, final_state.x),
                      prob.out.dir + "/neointima.csv");
  write_manifest(prob.out.dir + "/manifest.json", prob.config_text, prob.mesh,
                 prob.solver, final_state);
  return final_state;
}

} // namespace isr
