#ifndef ISR_SOLVER_LINEAR_HPP
#define ISR_SOLVER_LINEAR_HPP

#include "isr/fem/assembler.hpp"
#include "isr/types.hpp"

#include <Eigen/Sparse>

#include <string>

namespace isr {

/// Direct sparse solve of J dx = -r with Ruiz equilibration to tame the
/// wildly different magnitudes of the coupled fields. Throws
/// SingularSystemError with dof diagnostics when the factorization fails or
/// the solve does not reach the relative-residual contract (1e-10).
struct SingularSystemError : std::runtime_error {
  explicit SingularSystemError(const std::string& msg)
      : std::runtime_error(msg) {}
};

VecX linear_solve(const AssembledSystem& sys, const DofMap* dofs = nullptr);

/// Equilibrated copy of A (rows scaled by dr, columns by dc) via a few Ruiz
/// sweeps; returns the scalings.
void ruiz_equilibrate(Eigen::SparseMatrix<double>& A, VecX& dr, VecX& dc,
                      int sweeps = 4);

} // namespace isr

#endif
