#include "isr/verify/tangents.hpp"

#include <cmath>
#include <sstream>

namespace isr {

MatX fd_jacobian(const Assembler& assembler, const VecX& x,
                 const StepCache& cache, double t, double dt,
                 const AssemblyOptions& opt) {
  const DofMap& dofs = assembler.dofs();
  const VecX scales = dof_scales(dofs, assembler.params());
  const Index n = dofs.n_dofs();
  MatX J = MatX::Zero(n, n);
  const double rel = 3e-6; // cbrt(eps)-ish for central differences
  VecX xp = x;
  for (Index j = 0; j < n; ++j) {
    if (dofs.fixed[j]) continue;
    const double h = rel * std::max(std::abs(x[j]), scales[j]);
    xp[j] = x[j] + h;
    const VecX rp = assembler.residual_only(xp, cache, t, dt, opt);
    xp[j] = x[j] - h;
    const VecX rm = assembler.residual_only(xp, cache, t, dt, opt);
    xp[j] = x[j];
    J.col(j) = (rp - rm) / (2.0 * h);
  }
  return J;
}

TangentCheck check_monolithic_tangent(const Assembler& assembler, const VecX& x,
                                      const StepCache& cache, double t,
                                      double dt, const AssemblyOptions& opt) {
  const DofMap& dofs = assembler.dofs();
  const MatX Jfd = fd_jacobian(assembler, x, cache, t, dt, opt);
  const AssembledSystem sys = assembler.assemble(x, cache, t, dt, opt);
  MatX Jan = MatX(sys.J);
  // identity rows of fixed dofs are not part of the physics
  for (Index d = 0; d < dofs.n_dofs(); ++d)
    if (dofs.fixed[d]) {
      Jan.row(d).setZero();
      Jan.col(d).setZero();
    }

  const int G = DofMap::n_groups;
  MatX num = MatX::Zero(G, G), den = MatX::Zero(G, G);
  for (Index i = 0; i < Jan.rows(); ++i) {
    if (dofs.fixed[i]) continue;
    const int gi = dofs.group_of_dof(i);
    for (Index j = 0; j < Jan.cols(); ++j) {
      if (dofs.fixed[j]) continue;
      const int gj = dofs.group_of_dof(j);
      const double d = Jan(i, j) - Jfd(i, j);
      num(gi, gj) += d * d;
      den(gi, gj) += Jfd(i, j) * Jfd(i, j);
    }
  }

  TangentCheck out;
  out.block_err = MatX::Zero(G, G);
  const double floor = 1e-12 * std::sqrt(den.sum());
  std::ostringstream ss;
  for (int gi = 0; gi < G; ++gi)
    for (int gj = 0; gj < G; ++gj) {
      const double d = std::sqrt(den(gi, gj));
      if (d <= floor) continue; // empty or negligible block
      const double e = std::sqrt(num(gi, gj)) / d;
      out.block_err(gi, gj) = e;
      if (e > out.max_rel_err) out.max_rel_err = e;
      ss << DofMap::group_name(gi) << "/" << DofMap::group_name(gj) << " "
         << e << "\n";
    }
  out.report = ss.str();
  return out;
}

} // namespace isr
