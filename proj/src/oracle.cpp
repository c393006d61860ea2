#include "isr/verify/oracle.hpp"

#include "isr/driver.hpp"
#include "isr/fem/assembler.hpp"
#include "isr/verify/ode.hpp"

#include <cmath>
#include <sstream>

namespace isr {

ConfigDoc oracle_config() {
  return ConfigDoc::parse_string(R"(
# smooth kinetics setup: all six fields evolve, no field faster than
# ~5e-3/day, so a small backward-Euler step tracks the exact trajectory
[kinetics]
rho_S_eq = 1.0e3
kappa_P  = 5.0e21
eta_P    = 1.0e-5
l_P1     = 0.05
eps_P    = 4.0e-6
eps_T    = 2.0e-6
eta_C    = 1.7e-14
eps_C    = 1.0e12
eps_D1   = 3.0e-6
eta_S    = 0.05
eta_E    = 0.01
eps_E    = 0.002
r_eta    = 0.5

[mesh]
source   = box
nx = 1
ny = 1
nz = 1
lumen_z0 = healthy

[bc]
displacement = fix_all
q_P_ref = 0
q_T_ref = 0
q_D_ref = 0
l_B     = 1.0
eps_D2  = 0
t_p     = 5
t_c     = 1

[ic]
c_P_0   = 2.0e-15
c_T_0   = 1.5e-16
c_C_0   = 3.5e-9
c_D_0   = 2.0e-15
rho_S_0 = 1.2e3
rho_E_healthy_0 = 250
)");
}

OracleComparison compare_single_hex_to_ode(double dt, double t_end) {
  ConfigDoc doc = oracle_config();
  Problem prob = setup_problem(doc);
  const ModelParams& p = prob.params;

  Assembler assembler(prob.mesh, prob.dofs, prob.params);
  SimulationState state = make_initial_state(assembler);

  // reference trajectory, sampled daily
  VecX y0(n_transport_fields);
  y0 << p.ic.c_P, p.ic.c_T, p.ic.c_C, p.ic.c_D, p.ic.rho_S, p.ic.rho_E_healthy;
  std::vector<double> samples;
  for (double t = 0.0; t <= t_end + 1e-9; t += 1.0) samples.push_back(t);
  const OdeTrajectory ref =
      integrate_0d(make_kinetics_ode(p, Layer::media, y0), samples);

  SolverConfig cfg = prob.solver;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.newton_rel = 1e-12;
  cfg.newton_abs = 1e-12;
  cfg.line_search = false;

  OracleComparison cmp;
  std::array<double, 6> ref_scale{};
  for (const auto& y : ref.y)
    for (int f = 0; f < 6; ++f)
      ref_scale[f] = std::max(ref_scale[f], std::abs(y[f]));

  const DofMap& dofs = prob.dofs;
  size_t next_sample = 1; // sample 0 is the shared initial condition
  AssemblyOptions aopt;
  aopt.mechanics = false; // displacement fully pinned
  aopt.boundary_fluxes = false;

  NewtonOptions nopt;
  nopt.rel_tol = cfg.newton_rel;
  nopt.abs_tol = cfg.newton_abs;
  nopt.max_iter = 20;
  nopt.line_search = false;

  double t = 0.0;
  const long n_steps = std::lround(t_end / dt);
  for (long k = 1; k <= n_steps; ++k) {
    StepCache cache = assembler.make_step_cache(state.x);
    const double t_new = static_cast<double>(k) * dt;
    NewtonReport rep =
        newton_solve(assembler, state.x, cache, t_new, t_new - t, aopt, nopt);
    if (!rep.converged)
      throw std::runtime_error("oracle run: Newton failed: " + rep.message);
    t = t_new;
    while (next_sample < samples.size() &&
           t >= samples[next_sample] - 1e-9) {
      const VecX& y = ref.y[next_sample];
      // spatially uniform: read the first node / first surface node
      const double fem[6] = {state.x[dofs.dof(0, comp_cP)],
                             state.x[dofs.dof(0, comp_cT)],
                             state.x[dofs.dof(0, comp_cC)],
                             state.x[dofs.dof(0, comp_cD)],
                             state.x[dofs.dof(0, comp_rS)],
                             state.x[dofs.dof_rE(dofs.surface_nodes()[0])]};
      for (int f = 0; f < 6; ++f) {
        const double dev = std::abs(fem[f] - y[f]) / ref_scale[f];
        cmp.max_rel_dev[f] = std::max(cmp.max_rel_dev[f], dev);
      }
      ++next_sample;
    }
  }

  std::ostringstream ss;
  for (int f = 0; f < 6; ++f) {
    cmp.worst = std::max(cmp.worst, cmp.max_rel_dev[f]);
    ss << field_name(f) << " " << cmp.max_rel_dev[f] << "\n";
  }
  cmp.table = ss.str();
  return cmp;
}

} // namespace isr
