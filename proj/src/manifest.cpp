#include "isr/io/manifest.hpp"

#include "isr/io/csv.hpp"
#include "isr/io/hash.hpp"

#include <json.hpp>

#include <fstream>

namespace isr {

void write_manifest(const std::string& path, const std::string& config_text,
                    const Mesh& mesh, const SolverConfig& solver,
                    const SimulationState& final_state) {
  nlohmann::json j;
  j["code"] = code_version;
  j["config_fnv1a"] = fnv1a(config_text);
  j["mesh"] = {{"nodes", mesh.n_nodes()},
               {"hexes", mesh.n_hexes()},
               {"quads", mesh.quads.size()},
               {"endothelium_nodes", mesh.endothelium_nodes().size()}};
  j["solver"] = {{"dt", solver.dt},
                 {"t_end", solver.t_end},
                 {"newton_rel", solver.newton_rel},
                 {"newton_abs", solver.newton_abs},
                 {"mode", solver.mode == SolverConfig::Mode::monolithic
                              ? "monolithic"
                              : "staggered"}};
  j["final"] = {{"t", final_state.t}, {"steps", final_state.step}};
  j["dissipation"] = {
      {"checked", final_state.audit.checked},
      {"violations", final_state.audit.violations},
      {"min_D_red", final_state.audit.checked ? final_state.audit.min_D_red : 0.0},
      {"max_R0_min", final_state.audit.max_R0_min},
      {"all_finite", final_state.audit.all_finite}};
  j["schemas"] = {{"timeseries", TimeseriesWriter::header()},
                  {"profile", "z,dr"}};
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("write_manifest: cannot open '" + path + "'");
  out << j.dump(2) << "\n";
}

} // namespace isr
