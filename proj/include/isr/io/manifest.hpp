#ifndef ISR_IO_MANIFEST_HPP
#define ISR_IO_MANIFEST_HPP

#include "isr/mesh.hpp"
#include "isr/params.hpp"
#include "isr/solver/timeloop.hpp"

#include <string>

namespace isr {

inline constexpr const char* code_version = "restenosis 1.0.0";

/// Reproducibility record written next to every run's outputs: config and
/// mesh fingerprints, mesh statistics, solver settings and the dissipation
/// audit. Deliberately timestamp-free so identical runs produce identical
/// manifests.
void write_manifest(const std::string& path, const std::string& config_text,
                    const Mesh& mesh, const SolverConfig& solver,
                    const SimulationState& final_state);

} // namespace isr

#endif
