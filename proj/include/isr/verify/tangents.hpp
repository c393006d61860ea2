#ifndef ISR_VERIFY_TANGENTS_HPP
#define ISR_VERIFY_TANGENTS_HPP

#include "isr/fem/assembler.hpp"

#include <string>

namespace isr {

/// Finite-difference audit of the monolithic Jacobian. Each (row-field,
/// column-field) block is compared in the Frobenius norm; the worst relative
/// block error is the headline number.
struct TangentCheck {
  double max_rel_err = 0.0;
  MatX block_err;  ///< n_groups x n_groups relative errors
  std::string report;
};

TangentCheck check_monolithic_tangent(const Assembler& assembler, const VecX& x,
                                      const StepCache& cache, double t,
                                      double dt, const AssemblyOptions& opt);

/// Central finite-difference Jacobian of the assembled residual (small
/// systems only).
MatX fd_jacobian(const Assembler& assembler, const VecX& x,
                 const StepCache& cache, double t, double dt,
                 const AssemblyOptions& opt);

} // namespace isr

#endif
