#ifndef ISR_VERIFY_MMS_HPP
#define ISR_VERIFY_MMS_HPP

#include "isr/params.hpp"
#include "isr/types.hpp"

#include <string>
#include <vector>

namespace isr {

/// Manufactured-solutions convergence study on the unit box: smooth
/// trigonometric fields for the five bulk scalars, displacement pinned,
/// steady residual with an exact forcing term.
struct MmsCase {
  bool taxis = false; ///< include the SMC taxis fluxes and SUPG
  std::vector<int> levels = {4, 8, 16};
};

struct MmsResult {
  std::vector<int> levels;
  std::vector<std::array<double, n_bulk_fields>> l2_error;
  /// observed orders between consecutive levels, per field
  std::vector<std::array<double, n_bulk_fields>> order;
  std::string table;
};

MmsResult mms_run(const MmsCase& mcase);

} // namespace isr

#endif
