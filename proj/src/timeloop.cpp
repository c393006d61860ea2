#include "isr/solver/timeloop.hpp"

#include "isr/mechanics.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace isr {

namespace {

void audit_dissipation(const Assembler& assembler, SimulationState& state,
                       double dt) {
  const Mesh& mesh = assembler.mesh();
  const ModelParams& p = assembler.params();
  const auto& geoms = assembler.hex_geometry();
  const DofMap& dofs = assembler.dofs();

  auto theta_new = assembler.growth_field(state.x);
  auto c0C_new = assembler.c0C_field(state.x);

  for (Index e = 0; e < mesh.n_hexes(); ++e) {
    const auto& geom = geoms[e];
    for (int q = 0; q < Hex8::n_qp; ++q) {
      Mat3 F = Mat3::Identity();
      for (int a = 0; a < 8; ++a) {
        const Index node = mesh.hexes[e][a];
        for (int i = 0; i < 3; ++i)
          F.row(i) += state.x[dofs.dof(node, i)] * geom.G[q][a].transpose();
      }
      QuadPointState qp;
      qp.layer = geom.layer;
      qp.frame = geom.frame[q];
      qp.theta = theta_new[e][q];
      qp.c0_C = c0C_new[e][q];
      const double cdot = (c0C_new[e][q] - state.c0C_prev[e][q]) / dt;
      const auto d = dissipation_check(F.transpose() * F, qp, 0.0, cdot, p);
      auto& audit = state.audit;
      ++audit.checked;
      if (!std::isfinite(d.D_red) || !std::isfinite(d.R0_min))
        audit.all_finite = false;
      if (cdot <= 0.0) {
        audit.min_D_red = std::min(audit.min_D_red, d.D_red);
        if (d.D_red < -1e-12) ++audit.violations;
      } else {
        audit.max_R0_min = std::max(audit.max_R0_min, d.R0_min);
      }
    }
  }
  state.theta_qp = std::move(theta_new);
  state.c0C_prev = std::move(c0C_new);
}

// Alternating transport/mechanics sub-solves until the monolithic residual
// converges; used for robustness experiments.
NewtonReport staggered_step(const Assembler& assembler, VecX& x,
                            const StepCache& cache, double t, double dt,
                            const SolverConfig& cfg) {
  const DofMap& dofs = assembler.dofs();
  std::vector<char> freeze_u(dofs.n_dofs(), 0), freeze_fields(dofs.n_dofs(), 0);
  for (Index n = 0; n < dofs.n_nodes(); ++n) {
    for (int c = 0; c < 3; ++c) freeze_u[dofs.dof(n, c)] = 1;
    for (int c = 3; c < comps_per_node; ++c) freeze_fields[dofs.dof(n, c)] = 1;
  }
  // rho_E belongs to the transport half

  NewtonOptions nopt;
  nopt.rel_tol = cfg.newton_rel;
  nopt.abs_tol = cfg.newton_abs;
  nopt.max_iter = cfg.newton_max_iter;
  nopt.line_search = cfg.line_search;

  AssemblyOptions aopt;
  NewtonReport total;
  for (int outer = 0; outer < cfg.staggered_max_outer; ++outer) {
    NewtonOptions sub = nopt;
    sub.extra_fixed = &freeze_u;
    NewtonReport rt = newton_solve(assembler, x, cache, t, dt, aopt, sub);
    if (!rt.converged) return rt;
    sub.extra_fixed = &freeze_fields;
    NewtonReport rm = newton_solve(assembler, x, cache, t, dt, aopt, sub);
    if (!rm.converged) return rm;
    total.iterations += rt.iterations + rm.iterations;

    // monolithic convergence check
    NewtonOptions check = nopt;
    check.max_iter = 0;
    NewtonReport rc = newton_solve(assembler, x, cache, t, dt, aopt, check);
    if (!rc.norms.empty()) total.norms.push_back(rc.norms.front());
    if (rc.converged) {
      total.converged = true;
      return total;
    }
  }
  total.message = "staggered: outer iterations exceeded";
  return total;
}

} // namespace

SimulationState make_initial_state(const Assembler& assembler) {
  SimulationState s;
  s.x = initial_state(assembler.mesh(), assembler.dofs(), assembler.params());
  s.t = 0.0;
  s.step = 0;
  s.theta_qp = assembler.growth_field(s.x);
  s.c0C_prev = assembler.c0C_field(s.x);
  return s;
}

SimulationState run(const Assembler& assembler, const SolverConfig& cfg,
                    SimulationState state, const StepCallback& on_step) {
  if (!(cfg.dt > 0.0) || !(cfg.t_end >= cfg.dt))
    throw std::invalid_argument("run: need dt > 0 and t_end >= dt");
  if (state.dt_current <= 0.0) state.dt_current = cfg.dt;

  NewtonOptions nopt;
  nopt.rel_tol = cfg.newton_rel;
  nopt.abs_tol = cfg.newton_abs;
  nopt.max_iter = cfg.newton_max_iter;
  nopt.line_search = cfg.line_search;
  AssemblyOptions aopt;

  const double t_eps = 1e-9 * cfg.dt;
  while (state.t < cfg.t_end - t_eps) {
    StepCache cache = assembler.make_step_cache(state.x);
    int halvings = 0;
    for (;;) {
      double dt = std::min(state.dt_current, cfg.t_end - state.t);
      VecX x_try = state.x;
      NewtonReport rep =
          cfg.mode == SolverConfig::Mode::monolithic
              ? newton_solve(assembler, x_try, cache, state.t + dt, dt, aopt,
                             nopt)
              : staggered_step(assembler, x_try, cache, state.t + dt, dt, cfg);
      if (rep.converged && x_try.allFinite()) {
        state.x = std::move(x_try);
        state.t += dt;
        ++state.step;
        ++state.success_streak;
        if (state.success_streak >= cfg.redouble_after &&
            state.dt_current < cfg.dt) {
          state.dt_current = std::min(2.0 * state.dt_current, cfg.dt);
          state.success_streak = 0;
        }
        audit_dissipation(assembler, state, dt);
        state.history.push_back(rep);
        if (cfg.log) {
          (*cfg.log) << "step " << state.step << " t " << state.t
                     << " dt " << dt << " newton_iters " << rep.iterations
                     << " norm "
                     << (rep.norms.empty() ? 0.0 : rep.norms.back()) << "\n";
          cfg.log->flush();
        }
        if (on_step) on_step(state, assembler);
        break;
      }
      ++halvings;
      if (halvings > cfg.max_halvings)
        throw std::runtime_error(
            "run: step " + std::to_string(state.step + 1) +
            " failed after dt halvings: " + rep.message);
      state.dt_current *= 0.5;
      state.success_streak = 0;
      if (cfg.log)
        (*cfg.log) << "retry t " << state.t << " dt " << state.dt_current
                   << " (" << rep.message << ")\n";
    }
  }
  return state;
}

namespace {
constexpr char ckpt_magic[8] = {'I', 'S', 'R', 'C', 'K', 'P', 'T', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void get(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}
} // namespace

void write_checkpoint(const SimulationState& state, std::uint64_t mesh_hash,
                      std::uint64_t params_hash, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("write_checkpoint: cannot open '" + path + "'");
  out.write(ckpt_magic, 8);
  put(out, std::uint32_t{1});
  put(out, mesh_hash);
  put(out, params_hash);
  put(out, state.t);
  put(out, static_cast<std::int64_t>(state.step));
  put(out, state.dt_current);
  put(out, static_cast<std::int32_t>(state.success_streak));
  put(out, static_cast<std::uint64_t>(state.x.size()));
  out.write(reinterpret_cast<const char*>(state.x.data()),
            state.x.size() * sizeof(double));
  put(out, static_cast<std::uint64_t>(state.c0C_prev.size()));
  for (const auto& arr : state.c0C_prev)
    out.write(reinterpret_cast<const char*>(arr.data()),
              arr.size() * sizeof(double));
  for (const auto& arr : state.theta_qp)
    out.write(reinterpret_cast<const char*>(arr.data()),
              arr.size() * sizeof(double));
  put(out, state.audit.min_D_red);
  put(out, state.audit.max_R0_min);
  put(out, static_cast<std::int64_t>(state.audit.checked));
  put(out, static_cast<std::int64_t>(state.audit.violations));
  put(out, static_cast<std::uint8_t>(state.audit.all_finite ? 1 : 0));
  if (!out) throw std::runtime_error("write_checkpoint: write failed");
}

SimulationState read_checkpoint(const std::string& path,
                                std::uint64_t mesh_hash,
                                std::uint64_t params_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("read_checkpoint: cannot open '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, ckpt_magic, 8) != 0)
    throw std::runtime_error("read_checkpoint: bad magic");
  std::uint32_t version = 0;
  get(in, version);
  if (version != 1)
    throw std::runtime_error("read_checkpoint: unsupported version");
  std::uint64_t mh = 0, ph = 0;
  get(in, mh);
  get(in, ph);
  if (mh != mesh_hash || ph != params_hash)
    throw std::runtime_error(
        "read_checkpoint: checkpoint belongs to a different mesh/parameter "
        "set");
  SimulationState s;
  std::int64_t step = 0;
  std::int32_t streak = 0;
  get(in, s.t);
  get(in, step);
  get(in, s.dt_current);
  get(in, streak);
  s.step = step;
  s.success_streak = streak;
  std::uint64_t n = 0;
  get(in, n);
  s.x.resize(static_cast<Index>(n));
  in.read(reinterpret_cast<char*>(s.x.data()), n * sizeof(double));
  std::uint64_t ne = 0;
  get(in, ne);
  s.c0C_prev.resize(ne);
  for (auto& arr : s.c0C_prev)
    in.read(reinterpret_cast<char*>(arr.data()), arr.size() * sizeof(double));
  s.theta_qp.resize(ne);
  for (auto& arr : s.theta_qp)
    in.read(reinterpret_cast<char*>(arr.data()), arr.size() * sizeof(double));
  std::uint8_t fin = 1;
  std::int64_t checked = 0, viol = 0;
  get(in, s.audit.min_D_red);
  get(in, s.audit.max_R0_min);
  get(in, checked);
  get(in, viol);
  get(in, fin);
  s.audit.checked = checked;
  s.audit.violations = viol;
  s.audit.all_finite = fin != 0;
  if (!in) throw std::runtime_error("read_checkpoint: truncated file");
  return s;
}

} // namespace isr
