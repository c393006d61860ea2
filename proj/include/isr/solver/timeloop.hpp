#ifndef ISR_SOLVER_TIMELOOP_HPP
#define ISR_SOLVER_TIMELOOP_HPP

#include "isr/fem/assembler.hpp"
#include "isr/solver/newton.hpp"

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>

namespace isr {

struct SolverConfig {
  double dt = 1.0;    ///< [day]
  double t_end = 30.0;
  double newton_rel = 1e-8;
  double newton_abs = 1e-10;
  int newton_max_iter = 25;
  bool line_search = true;
  enum class Mode { monolithic, staggered };
  Mode mode = Mode::monolithic;
  int max_halvings = 4;      ///< per failed step
  int redouble_after = 3;    ///< successes before growing dt back
  int staggered_max_outer = 25;
  std::ostream* log = nullptr; ///< machine-parseable progress lines
};

/// Running record of the reduced dissipation inequality along the
/// trajectory (evaluated at every bulk quadrature point of every accepted
/// step).
struct DissipationAudit {
  double min_D_red = std::numeric_limits<double>::infinity();
  double max_R0_min = 0.0;
  long checked = 0;
  long violations = 0; ///< D_red < -1e-12 where c0C is non-increasing
  bool all_finite = true;
};

struct SimulationState {
  VecX x;
  double t = 0.0;
  long step = 0;
  double dt_current = 0.0;
  int success_streak = 0;
  std::vector<std::array<double, Hex8::n_qp>> theta_qp;
  std::vector<std::array<double, Hex8::n_qp>> c0C_prev;
  DissipationAudit audit;
  std::vector<NewtonReport> history;
};

using StepCallback =
    std::function<void(const SimulationState&, const Assembler&)>;

/// Advances the coupled system from the state's time to t_end with backward
/// Euler; on Newton failure the step is retried with a halved dt (up to
/// max_halvings). The callback fires after every accepted step.
SimulationState run(const Assembler& assembler, const SolverConfig& config,
                    SimulationState state, const StepCallback& on_step = {});

/// Fresh state at t = 0 from the initial conditions.
SimulationState make_initial_state(const Assembler& assembler);

/// Versioned binary checkpoints; restart reproduces the uninterrupted
/// trajectory bitwise.
void write_checkpoint(const SimulationState& state, std::uint64_t mesh_hash,
                      std::uint64_t params_hash, const std::string& path);
SimulationState read_checkpoint(const std::string& path,
                                std::uint64_t mesh_hash,
                                std::uint64_t params_hash);

} // namespace isr

#endif
