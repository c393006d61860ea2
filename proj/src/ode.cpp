#include "isr/verify/ode.hpp"

#include "isr/kinetics.hpp"

#include <cmath>
#include <stdexcept>

namespace isr {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

} // namespace

OdeTrajectory integrate_0d(const OdeProblem& prob,
                           const std::vector<double>& t_out) {
  if (!prob.y0.allFinite())
    throw std::invalid_argument("integrate_0d: non-finite initial state");
  OdeTrajectory traj;
  VecX y = prob.y0;
  double t = t_out.empty() ? 0.0 : t_out.front();
  double h = 1e-3;
  VecX k1 = prob.rhs(t, y);

  for (double target : t_out) {
    while (t < target) {
      h = std::min(h, target - t);
      const VecX y2 = y + h * a21 * k1;
      const VecX k2 = prob.rhs(t + c2 * h, y2);
      const VecX y3 = y + h * (a31 * k1 + a32 * k2);
      const VecX k3 = prob.rhs(t + c3 * h, y3);
      const VecX y4 = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      const VecX k4 = prob.rhs(t + c4 * h, y4);
      const VecX y5 = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      const VecX k5 = prob.rhs(t + c5 * h, y5);
      const VecX y6 =
          y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      const VecX k6 = prob.rhs(t + h, y6);
      const VecX ynew =
          y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const VecX k7 = prob.rhs(t + h, ynew);
      const VecX err =
          h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double enorm = 0.0;
      for (Index i = 0; i < y.size(); ++i) {
        const double sc =
            prob.abs_tol +
            prob.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        enorm = std::max(enorm, std::abs(err[i]) / sc);
      }
      if (enorm <= 1.0) {
        t += h;
        y = ynew;
        k1 = k7; // FSAL
      }
      const double fac =
          std::clamp(0.9 * std::pow(std::max(enorm, 1e-10), -0.2), 0.2, 5.0);
      h *= fac;
      if (h < prob.min_step)
        throw std::runtime_error("integrate_0d: step size underflow");
    }
    traj.t.push_back(target);
    traj.y.push_back(y);
  }
  return traj;
}

OdeProblem make_kinetics_ode(const ModelParams& p, Layer layer,
                             const VecX& y0) {
  if (y0.size() != n_transport_fields)
    throw std::invalid_argument("make_kinetics_ode: state must have 6 fields");
  OdeProblem prob;
  prob.y0 = y0;
  prob.rhs = [&p, layer](double, const VecX& y) {
    const auto rates =
        bulk_rates(y[field_cP], y[field_cT], y[field_cC], y[field_cD],
                   y[field_rS], layer, p);
    VecX dy(n_transport_fields);
    for (int f = 0; f < n_bulk_fields; ++f) dy[f] = rates[f];
    const double c_D_nM =
        std::max(y[field_cD], 0.0) / units::mol_per_mm3_per_nM;
    dy[field_rE] = ec_rate(y[field_rE], c_D_nM, p);
    return dy;
  };
  return prob;
}

} // namespace isr
