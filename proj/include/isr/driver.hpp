#ifndef ISR_DRIVER_HPP
#define ISR_DRIVER_HPP

#include "isr/config.hpp"
#include "isr/fem/dofmap.hpp"
#include "isr/mesh.hpp"
#include "isr/params.hpp"
#include "isr/solver/timeloop.hpp"

#include <cstdint>
#include <string>

namespace isr {

/// Output plumbing read from the [output] section.
struct OutputSchedule {
  std::string dir = "out";
  int vtk_every = 0;       ///< 0 disables field dumps
  int series_every = 1;
  int checkpoint_every = 0;
  Vec3 probe = Vec3::Zero();
  bool probe_set = false;
};

/// Everything needed to run one simulation, assembled from one config
/// document: mesh (+ displacement constraints), parameters, solver settings
/// and the output schedule.
struct Problem {
  Mesh mesh;
  ModelParams params;
  DofMap dofs;
  SolverConfig solver;
  OutputSchedule out;
  std::uint64_t mesh_hash = 0;
  std::uint64_t params_hash = 0;
  std::string config_text;
};

Problem setup_problem(const ConfigDoc& doc);

/// Runs the problem with the configured outputs; optionally restarts from a
/// checkpoint. Returns the final state.
SimulationState run_problem(Problem& problem,
                            const std::string& restart_path = {},
                            std::ostream* log = nullptr);

} // namespace isr

#endif
