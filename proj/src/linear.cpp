#include "isr/solver/linear.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

namespace isr {

void ruiz_equilibrate(Eigen::SparseMatrix<double>& A, VecX& dr, VecX& dc,
                      int sweeps) {
  const Index n = A.rows();
  dr = VecX::Ones(n);
  dc = VecX::Ones(n);
  VecX rmax(n), cmax(n);
  for (int s = 0; s < sweeps; ++s) {
    rmax.setZero();
    cmax.setZero();
    for (int k = 0; k < A.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
        const double a = std::abs(it.value());
        rmax[it.row()] = std::max(rmax[it.row()], a);
        cmax[it.col()] = std::max(cmax[it.col()], a);
      }
    for (Index i = 0; i < n; ++i) {
      rmax[i] = rmax[i] > 0.0 ? 1.0 / std::sqrt(rmax[i]) : 1.0;
      cmax[i] = cmax[i] > 0.0 ? 1.0 / std::sqrt(cmax[i]) : 1.0;
    }
    for (int k = 0; k < A.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
        it.valueRef() *= rmax[it.row()] * cmax[it.col()];
    dr = dr.cwiseProduct(rmax);
    dc = dc.cwiseProduct(cmax);
  }
}

namespace {

std::string describe_dof(const DofMap* dofs, Index d) {
  std::ostringstream ss;
  if (!dofs) {
    ss << "dof " << d;
    return ss.str();
  }
  if (d >= comps_per_node * dofs->n_nodes()) {
    ss << "rho_E dof at surface node "
       << dofs->surface_nodes()[d - comps_per_node * dofs->n_nodes()];
    return ss.str();
  }
  static const char* comp_names[] = {"u_x", "u_y", "u_z", "c_P",
                                     "c_T", "c_C", "c_D", "rho_S"};
  ss << comp_names[d % comps_per_node] << " at node " << d / comps_per_node;
  return ss.str();
}

// Null-space diagnostics for small systems: name the dofs dominating the
// kernel vectors (typically rigid-body modes from missing constraints).
std::string null_space_report(const Eigen::SparseMatrix<double>& A,
                              const DofMap* dofs) {
  if (A.rows() > 3000) return "(system too large for null-space diagnostics)";
  const MatX dense = MatX(A);
  Eigen::FullPivLU<MatX> lu(dense);
  lu.setThreshold(1e-10);
  const MatX kernel = lu.kernel();
  if (lu.rank() == A.rows()) return "(no null space found at threshold 1e-10)";
  std::ostringstream ss;
  ss << "null-space dimension " << kernel.cols() << "; dominant dofs:";
  for (int k = 0; k < kernel.cols() && k < 8; ++k) {
    Index imax = 0;
    kernel.col(k).cwiseAbs().maxCoeff(&imax);
    ss << " [" << describe_dof(dofs, imax) << "]";
  }
  return ss.str();
}

} // namespace

VecX linear_solve(const AssembledSystem& sys, const DofMap* dofs) {
  if (!sys.residual.allFinite())
    throw SingularSystemError("linear_solve: non-finite residual");

  Eigen::SparseMatrix<double> A = sys.J;
  VecX dr, dc;
  ruiz_equilibrate(A, dr, dc, 4);
  const VecX b = -dr.cwiseProduct(sys.residual);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("linear_solve: factorization failed (" +
                              std::string(lu.lastErrorMessage()) + "); " +
                              null_space_report(sys.J, dofs));
  const VecX y = lu.solve(b);
  const double bn = b.norm();
  const double rel = bn > 0.0 ? (A * y - b).norm() / bn : (A * y).norm();
  if (!y.allFinite() || rel > 1e-10)
    throw SingularSystemError(
        "linear_solve: relative residual " + std::to_string(rel) +
        " exceeds 1e-10; " + null_space_report(sys.J, dofs));
  return dc.cwiseProduct(y);
}

} // namespace isr
