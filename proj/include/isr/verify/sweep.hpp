#ifndef ISR_VERIFY_SWEEP_HPP
#define ISR_VERIFY_SWEEP_HPP

#include "isr/config.hpp"
#include "isr/solver/timeloop.hpp"
#include "isr/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace isr {

/// Parameter-study specification: one swept quantity, everything else from
/// the base configuration.
struct SweepSpec {
  enum class Param { q_D_ref, release, r_eta };
  Param param = Param::q_D_ref;
  std::vector<double> values;  ///< q_D_ref [fmol/mm^2/day] or r_eta (media)
  std::vector<std::pair<double, double>> releases; ///< (t_p, t_c) pairs
};

SweepSpec sweep_spec_from_config(const ConfigDoc& doc);

/// One run of the study with the extracted quantities of interest.
struct SweepRun {
  double value = 0.0;    ///< swept value (t_p for release sweeps)
  double value2 = 0.0;   ///< t_c for release sweeps
  bool ok = false;
  std::string error;
  std::vector<double> t;
  std::vector<double> theta_probe; ///< growth stretch evolution at the probe
  std::vector<double> rhoE_probe;
  std::vector<double> profile_z;
  std::vector<double> profile_dr;  ///< neointima profile at t_end
  double final_theta = 0.0;
  double peak_neointima = 0.0;
  double mean_rhoE_denuded = 0.0;  ///< endothelial recovery at t_end
  DissipationAudit audit;
};

/// Runs the study (one independent solve per value, failures recorded and
/// skipped) and returns results in value order.
std::vector<SweepRun> sweep(const SweepSpec& spec, const ConfigDoc& base);

/// CSV dump: one row per run plus per-run series files under dir.
void write_sweep_csv(const std::vector<SweepRun>& runs, const std::string& dir);

} // namespace isr

#endif
