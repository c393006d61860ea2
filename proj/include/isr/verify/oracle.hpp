#ifndef ISR_VERIFY_ORACLE_HPP
#define ISR_VERIFY_ORACLE_HPP

#include "isr/config.hpp"

#include <array>
#include <string>

namespace isr {

/// Smooth well-mixed configuration used for the FEM-vs-ODE equivalence
/// audit: every reaction channel active at a gentle rate so the
/// backward-Euler error stays below the comparison tolerance at a tractable
/// step count.
ConfigDoc oracle_config();

struct OracleComparison {
  std::array<double, 6> max_rel_dev{}; ///< per transport field
  double worst = 0.0;
  std::string table;
};

/// Runs a single hex (with one endothelium quad, homogeneous Neumann
/// everywhere, displacement pinned) against the independent Runge-Kutta
/// integration of the same kinetics, sampled once per day.
OracleComparison compare_single_hex_to_ode(double dt, double t_end);

} // namespace isr

#endif
