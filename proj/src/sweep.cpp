#include "isr/verify/sweep.hpp"

#include "isr/driver.hpp"
#include "isr/fem/assembler.hpp"
#include "isr/io/csv.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace isr {

SweepSpec sweep_spec_from_config(const ConfigDoc& doc) {
  SweepSpec spec;
  const std::string param = doc.get_string("sweep", "param", "q_D_ref");
  if (param == "q_D_ref")
    spec.param = SweepSpec::Param::q_D_ref;
  else if (param == "release")
    spec.param = SweepSpec::Param::release;
  else if (param == "r_eta")
    spec.param = SweepSpec::Param::r_eta;
  else
    throw std::runtime_error("sweep: param must be q_D_ref|release|r_eta");

  if (spec.param == SweepSpec::Param::release) {
    const auto v = doc.get_values("sweep", "values");
    if (v.empty() || v.size() % 2 != 0)
      throw std::runtime_error("sweep: release values are (t_p t_c) pairs");
    for (size_t i = 0; i < v.size(); i += 2)
      spec.releases.emplace_back(v[i], v[i + 1]);
  } else {
    spec.values = doc.get_values("sweep", "values");
    if (spec.values.empty()) throw std::runtime_error("sweep: empty value list");
  }
  return spec;
}

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

SweepRun run_one(const ConfigDoc& base, SweepSpec::Param param, double v1,
                 double v2) {
  SweepRun out;
  out.value = v1;
  out.value2 = v2;
  try {
    ConfigDoc doc = base;
    switch (param) {
      case SweepSpec::Param::q_D_ref:
        doc.set("bc", "q_D_ref", {fmt(v1)});
        break;
      case SweepSpec::Param::release:
        doc.set("bc", "t_p", {fmt(v1)});
        doc.set("bc", "t_c", {fmt(v2)});
        break;
      case SweepSpec::Param::r_eta: {
        // sweep the media value, keep the adventitia at the base value
        const auto base_val =
            doc.has("kinetics", "r_eta")
                ? doc.get_layered("kinetics", "r_eta")
                : std::pair<double, double>{0.5, 0.0};
        doc.set("kinetics", "r_eta", {fmt(v1), fmt(base_val.second)});
        break;
      }
    }
    doc.set("output", "vtk_every", {"0"});
    doc.set("output", "checkpoint_every", {"0"});

    Problem prob = setup_problem(doc);
    Assembler assembler(prob.mesh, prob.dofs, prob.params);
    SimulationState state = make_initial_state(assembler);
    const Probe probe = resolve_probe(prob.mesh, prob.out.probe);

    auto record = [&](const SimulationState& s) {
      out.t.push_back(s.t);
      double th = 0.0;
      for (double w : s.theta_qp[probe.elem]) th += w / 8.0;
      out.theta_probe.push_back(th);
      out.rhoE_probe.push_back(
          probe.surf_node >= 0 ? s.x[prob.dofs.dof_rE(probe.surf_node)] : 0.0);
    };
    record(state);

    SolverConfig cfg = prob.solver;
    state = run(assembler, cfg, std::move(state),
                [&](const SimulationState& s, const Assembler&) { record(s); });

    out.final_theta = out.theta_probe.back();
    if (prob.mesh.nodesets.count("lumen")) {
      const NeointimaProfile prof =
          neointima_profile(prob.mesh, prob.dofs, state.x);
      out.profile_z = prof.z;
      out.profile_dr = prof.dr;
      out.peak_neointima = prof.peak();
    }
    out.mean_rhoE_denuded = mean_denuded_rhoE(prob.mesh, prob.dofs, state.x);
    out.audit = state.audit;
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

} // namespace

std::vector<SweepRun> sweep(const SweepSpec& spec, const ConfigDoc& base) {
  std::vector<SweepRun> runs;
  if (spec.param == SweepSpec::Param::release) {
    for (const auto& [tp, tc] : spec.releases)
      runs.push_back(run_one(base, spec.param, tp, tc));
  } else {
    for (double v : spec.values) runs.push_back(run_one(base, spec.param, v, 0.0));
  }
  return runs;
}

void write_sweep_csv(const std::vector<SweepRun>& runs, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream summary(dir + "/sweep_summary.csv");
  summary.precision(12);
  summary << "value,value2,ok,final_theta,peak_neointima,mean_rhoE_denuded\n";
  for (size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    summary << r.value << "," << r.value2 << "," << (r.ok ? 1 : 0) << ","
            << r.final_theta << "," << r.peak_neointima << ","
            << r.mean_rhoE_denuded << "\n";
    if (!r.ok) continue;
    std::ofstream series(dir + "/run_" + std::to_string(i) + "_probe.csv");
    series.precision(12);
    series << "t,theta,rho_E\n";
    for (size_t k = 0; k < r.t.size(); ++k)
      series << r.t[k] << "," << r.theta_probe[k] << "," << r.rhoE_probe[k]
             << "\n";
    std::ofstream prof(dir + "/run_" + std::to_string(i) + "_profile.csv");
    prof.precision(12);
    prof << "z,dr\n";
    for (size_t k = 0; k < r.profile_z.size(); ++k)
      prof << r.profile_z[k] << "," << r.profile_dr[k] << "\n";
  }
}

} // namespace isr
