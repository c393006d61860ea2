#ifndef ISR_SOLVER_NEWTON_HPP
#define ISR_SOLVER_NEWTON_HPP

#include "isr/fem/assembler.hpp"
#include "isr/solver/linear.hpp"

#include <vector>

namespace isr {

struct NewtonOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  int max_iter = 25;
  bool line_search = true;
  double divergence_factor = 1e4;
  /// Additional frozen dofs (staggered sub-solves).
  const std::vector<char>* extra_fixed = nullptr;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> norms; ///< worst scaled per-field norm per iteration
  std::string message;
};

/// Full Newton iteration on the monolithic residual. Convergence is judged
/// per field group on diagonally scaled residuals, so fields of wildly
/// different units converge under one pair of tolerances.
NewtonReport newton_solve(const Assembler& assembler, VecX& x,
                          const StepCache& cache, double t, double dt,
                          const AssemblyOptions& aopt, const NewtonOptions& nopt);

} // namespace isr

#endif
