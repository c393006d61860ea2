#ifndef ISR_VERIFY_ODE_HPP
#define ISR_VERIFY_ODE_HPP

#include "isr/params.hpp"
#include "isr/types.hpp"

#include <functional>
#include <vector>

namespace isr {

/// Well-mixed kinetics problem: the six transport fields under the reaction
/// terms alone. Integrated by an adaptive explicit Runge-Kutta pair,
/// deliberately independent of the finite element path.
struct OdeProblem {
  VecX y0; ///< [c_P, c_T, c_C, c_D, rho_S, rho_E]
  std::function<VecX(double t, const VecX& y)> rhs;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double min_step = 1e-12;
};

struct OdeTrajectory {
  std::vector<double> t;
  std::vector<VecX> y;
};

/// Dormand-Prince 5(4) with proportional step control. Samples are recorded
/// at the requested output times (dense output by integrating exactly to each
/// sample time).
OdeTrajectory integrate_0d(const OdeProblem& problem,
                           const std::vector<double>& t_out);

/// The coupled 0D restenosis kinetics (bulk rates + EC rate with the drug
/// trace coupling, no transport, no boundary terms).
OdeProblem make_kinetics_ode(const ModelParams& p, Layer layer, const VecX& y0);

} // namespace isr

#endif
