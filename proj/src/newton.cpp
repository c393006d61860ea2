#include "isr/solver/newton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isr {

namespace {

// Per-group 2-norm of the residual scaled by the Jacobian diagonal; a
// unit-free measure comparable across the coupled fields.
std::array<double, DofMap::n_groups> scaled_norms(const AssembledSystem& sys,
                                                  const DofMap& dofs,
                                                  const std::vector<char>* extra) {
  VecX diag = sys.J.diagonal().cwiseAbs();
  const double dmax = diag.maxCoeff();
  std::array<double, DofMap::n_groups> sum{}, cnt{};
  for (Index d = 0; d < dofs.n_dofs(); ++d) {
    if (dofs.fixed[d] || (extra && (*extra)[d])) continue;
    const double w = std::max(diag[d], 1e-14 * dmax);
    const double r = sys.residual[d] / w;
    const int g = dofs.group_of_dof(d);
    sum[g] += r * r;
    cnt[g] += 1.0;
  }
  std::array<double, DofMap::n_groups> out{};
  for (int g = 0; g < DofMap::n_groups; ++g)
    out[g] = cnt[g] > 0 ? std::sqrt(sum[g] / cnt[g]) : 0.0;
  return out;
}

double worst(const std::array<double, DofMap::n_groups>& n) {
  return *std::max_element(n.begin(), n.end());
}

} // namespace

NewtonReport newton_solve(const Assembler& assembler, VecX& x,
                          const StepCache& cache, double t, double dt,
                          const AssemblyOptions& aopt,
                          const NewtonOptions& nopt) {
  NewtonReport rep;
  const DofMap& dofs = assembler.dofs();

  const std::vector<char>* frozen = nopt.extra_fixed;

  std::array<double, DofMap::n_groups> norms0{};
  double best = std::numeric_limits<double>::max();

  for (int it = 0; it <= nopt.max_iter; ++it) {
    AssembledSystem sys;
    try {
      sys = assembler.assemble(x, cache, t, dt, aopt);
    } catch (const std::exception& e) {
      rep.message = std::string("newton: assembly failed: ") + e.what();
      rep.iterations = it;
      return rep;
    }
    if (frozen) {
      for (int k = 0; k < sys.J.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator iter(sys.J, k); iter;
             ++iter)
          if ((*frozen)[iter.row()])
            iter.valueRef() = (iter.row() == iter.col()) ? 1.0 : 0.0;
      for (Index d = 0; d < dofs.n_dofs(); ++d)
        if ((*frozen)[d]) sys.residual[d] = 0.0;
    }

    const auto norms = scaled_norms(sys, dofs, frozen);
    const double nw = worst(norms);
    rep.norms.push_back(nw);
    if (it == 0) norms0 = norms;

    bool done = true;
    for (int g = 0; g < DofMap::n_groups; ++g)
      if (norms[g] > std::max(nopt.abs_tol, nopt.rel_tol * norms0[g]))
        done = false;
    if (done) {
      rep.converged = true;
      rep.iterations = it;
      return rep;
    }
    if (it == nopt.max_iter) break;
    if (!std::isfinite(nw) || (it > 0 && nw > nopt.divergence_factor * best)) {
      rep.message = "newton: residual diverged";
      rep.iterations = it;
      return rep;
    }
    best = std::min(best, nw);

    VecX dx;
    try {
      dx = linear_solve(sys, &dofs);
    } catch (const SingularSystemError& e) {
      rep.message = e.what();
      rep.iterations = it;
      return rep;
    }

    double alpha = 1.0;
    if (nopt.line_search) {
      const double r0 = sys.residual.norm();
      for (int ls = 0; ls < 8; ++ls) {
        bool ok = true;
        double rn = 0.0;
        try {
          VecX rt = assembler.residual_only(x + alpha * dx, cache, t, dt, aopt);
          if (frozen)
            for (Index d = 0; d < dofs.n_dofs(); ++d)
              if ((*frozen)[d]) rt[d] = 0.0;
          ok = rt.allFinite();
          rn = rt.norm();
        } catch (const std::exception&) {
          ok = false; // e.g. transiently inverted element
        }
        if (ok && (rn <= (1.0 - 1e-4 * alpha) * r0 || ls == 7)) break;
        alpha *= 0.5;
      }
    }
    x += alpha * dx;
  }
  rep.message = "newton: maximum iterations exceeded";
  rep.iterations = nopt.max_iter;
  return rep;
}

} // namespace isr
