#include "isr/fem/assembler.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <algorithm>
#include <stdexcept>

namespace isr {

namespace {

using AD64 = Eigen::AutoDiffScalar<Eigen::Matrix<double, 64, 1>>;
using AD8 = Eigen::AutoDiffScalar<Eigen::Matrix<double, 8, 1>>;

} // namespace

HexGeom build_hex_geom(const Mesh& mesh, Index elem, const ModelParams& p) {
  HexGeom g;
  g.layer = mesh.hex_layer[elem];
  const auto& h = mesh.hexes[elem];
  const auto qps = Hex8::gauss_points();
  const auto& Ntab = hex_shape_values();
  for (int q = 0; q < Hex8::n_qp; ++q) {
    const auto dN = Hex8::shape_grad(qps[q]);
    Mat3 J0 = Mat3::Zero();
    Vec3 X = Vec3::Zero();
    for (int a = 0; a < 8; ++a) {
      J0 += mesh.nodes[h[a]] * dN[a].transpose();
      X += Ntab[q][a] * mesh.nodes[h[a]];
    }
    const double det = J0.determinant();
    if (det <= 0.0)
      throw std::runtime_error("build_hex_geom: non-positive reference Jacobian");
    const Mat3 J0invT = J0.inverse().transpose();
    for (int a = 0; a < 8; ++a) g.G[q][a] = J0invT * dN[a];
    g.wdet[q] = det;
    g.Xq[q] = X;
    const LocalBasis basis = local_basis(mesh, X);
    g.frame[q] =
        build_fiber_frame(p.alpha_a(g.layer), basis.circumferential, basis.axial);
  }
  return g;
}

QuadGeom build_quad_geom(const Mesh& mesh, const Mesh::SurfQuad& quad) {
  QuadGeom g;
  g.tag = quad.tag;
  const auto qps = Quad4::gauss_points();
  for (int q = 0; q < Quad4::n_qp; ++q) {
    g.N[q] = Quad4::shape(qps[q][0], qps[q][1]);
    const auto dN = Quad4::shape_grad(qps[q][0], qps[q][1]);
    Vec3 t1 = Vec3::Zero(), t2 = Vec3::Zero();
    for (int a = 0; a < 4; ++a) {
      t1 += dN[a][0] * mesh.nodes[quad.nodes[a]];
      t2 += dN[a][1] * mesh.nodes[quad.nodes[a]];
    }
    Eigen::Matrix2d metric;
    metric << t1.dot(t1), t1.dot(t2), t1.dot(t2), t2.dot(t2);
    const double det = metric.determinant();
    if (det <= 0.0)
      throw std::runtime_error("build_quad_geom: degenerate surface quad");
    const Eigen::Matrix2d mi = metric.inverse();
    for (int a = 0; a < 4; ++a)
      g.SG[q][a] = t1 * (mi(0, 0) * dN[a][0] + mi(0, 1) * dN[a][1]) +
                   t2 * (mi(1, 0) * dN[a][0] + mi(1, 1) * dN[a][1]);
    g.wdA[q] = std::sqrt(det);
  }
  return g;
}

Assembler::Assembler(const Mesh& mesh, const DofMap& dofs,
                     const ModelParams& params)
    : mesh_(mesh), dofs_(dofs), params_(params) {
  hex_geom_.reserve(mesh.hexes.size());
  hex_dofs_.reserve(mesh.hexes.size());
  for (Index e = 0; e < mesh.n_hexes(); ++e) {
    hex_geom_.push_back(build_hex_geom(mesh, e, params));
    std::array<Index, 64> ed;
    for (int a = 0; a < 8; ++a)
      for (int c = 0; c < comps_per_node; ++c)
        ed[a * 8 + c] = dofs.dof(mesh.hexes[e][a], c);
    hex_dofs_.push_back(ed);
  }
  for (const auto& q : mesh.quads) {
    if (!is_lumen(q.tag)) continue;
    lumen_quads_.push_back(&q);
    lumen_geom_.push_back(build_quad_geom(mesh, q));
    std::array<Index, 8> qd;
    std::array<Index, 12> fr;
    for (int a = 0; a < 4; ++a) {
      qd[a] = is_endothelium(q.tag) ? dofs.dof_rE(q.nodes[a]) : -1;
      qd[4 + a] = dofs.dof(q.nodes[a], comp_cD);
      fr[a] = dofs.dof(q.nodes[a], comp_cP);
      fr[4 + a] = dofs.dof(q.nodes[a], comp_cT);
      fr[8 + a] = dofs.dof(q.nodes[a], comp_cD);
    }
    quad_dofs_.push_back(qd);
    flux_rows_.push_back(fr);
  }
  build_pattern();
}

void Assembler::build_pattern() {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(hex_dofs_.size() * 64 * 64 + quad_dofs_.size() * 200);
  for (const auto& ed : hex_dofs_)
    for (Index r : ed)
      for (Index c : ed) trip.emplace_back(r, c, 0.0);
  for (size_t k = 0; k < quad_dofs_.size(); ++k) {
    const auto& qd = quad_dofs_[k];
    const auto& fr = flux_rows_[k];
    for (Index r : qd)
      if (r >= 0)
        for (Index c : qd)
          if (c >= 0) trip.emplace_back(r, c, 0.0);
    for (Index r : fr)
      for (Index c : qd)
        if (c >= 0) trip.emplace_back(r, c, 0.0);
  }
  for (Index d = 0; d < dofs_.n_dofs(); ++d) trip.emplace_back(d, d, 0.0);

  pattern_.resize(dofs_.n_dofs(), dofs_.n_dofs());
  pattern_.setFromTriplets(trip.begin(), trip.end());
  pattern_.makeCompressed();

  auto find_slot = [&](Index row, Index col) -> Index {
    const Index start = pattern_.outerIndexPtr()[col];
    const Index end = pattern_.outerIndexPtr()[col + 1];
    const auto* inner = pattern_.innerIndexPtr();
    const auto* lo = std::lower_bound(inner + start, inner + end,
                                      static_cast<int>(row));
    if (lo == inner + end || *lo != row)
      throw std::logic_error("assembler: missing slot in sparsity pattern");
    return static_cast<Index>(lo - inner);
  };

  hex_slots_.resize(hex_dofs_.size());
  for (size_t e = 0; e < hex_dofs_.size(); ++e) {
    hex_slots_[e].resize(64 * 64);
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j)
        hex_slots_[e][i * 64 + j] =
            find_slot(hex_dofs_[e][i], hex_dofs_[e][j]);
  }
  quad_slots_.resize(quad_dofs_.size());
  flux_slots_.resize(quad_dofs_.size());
  for (size_t k = 0; k < quad_dofs_.size(); ++k) {
    quad_slots_[k].assign(64, -1);
    flux_slots_[k].assign(12 * 8, -1);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        if (quad_dofs_[k][i] >= 0 && quad_dofs_[k][j] >= 0)
          quad_slots_[k][i * 8 + j] =
              find_slot(quad_dofs_[k][i], quad_dofs_[k][j]);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 8; ++j)
        if (quad_dofs_[k][j] >= 0)
          flux_slots_[k][i * 8 + j] =
              find_slot(flux_rows_[k][i], quad_dofs_[k][j]);
  }
  diag_slots_.resize(dofs_.n_dofs());
  for (Index d = 0; d < dofs_.n_dofs(); ++d) diag_slots_[d] = find_slot(d, d);
}

StepCache Assembler::make_step_cache(const VecX& x_prev) const {
  StepCache cache;
  cache.x_prev = x_prev;
  cache.mass_prev.resize(hex_geom_.size());
  const auto& Ntab = hex_shape_values();
  for (size_t e = 0; e < hex_geom_.size(); ++e) {
    const auto& geom = hex_geom_[e];
    const auto& ed = hex_dofs_[e];
    for (int q = 0; q < Hex8::n_qp; ++q) {
      Mat3 F = Mat3::Identity();
      for (int a = 0; a < 8; ++a)
        for (int i = 0; i < 3; ++i)
          F.row(i) += x_prev[ed[a * 8 + i]] * geom.G[q][a].transpose();
      const double J = F.determinant();
      for (int f = 0; f < n_bulk_fields; ++f) {
        double phi = 0.0;
        for (int a = 0; a < 8; ++a) phi += Ntab[q][a] * x_prev[ed[a * 8 + 3 + f]];
        cache.mass_prev[e][q][f] = J * phi;
      }
    }
  }
  return cache;
}

AssembledSystem Assembler::assemble(const VecX& x, const StepCache& cache,
                                    double t, double dt,
                                    const AssemblyOptions& opt) const {
  AssembledSystem sys;
  sys.J = pattern_;
  sys.residual = VecX::Zero(dofs_.n_dofs());
  sys.fixed = &dofs_.fixed;
  double* vals = sys.J.valuePtr();
  std::fill(vals, vals + sys.J.nonZeros(), 0.0);

  const auto& fixed = dofs_.fixed;

  // bulk elements
  {
    Eigen::Matrix<AD64, 64, 1> xe;
    Eigen::Matrix<AD64, 64, 1> re;
    for (size_t e = 0; e < hex_geom_.size(); ++e) {
      const auto& ed = hex_dofs_[e];
      for (int i = 0; i < 64; ++i) {
        xe[i].value() = x[ed[i]];
        xe[i].derivatives().setZero();
        xe[i].derivatives()[i] = 1.0;
      }
      bulk_element_residual(hex_geom_[e], xe, cache.mass_prev[e], dt, params_,
                            opt, re);
      const auto& slots = hex_slots_[e];
      for (int i = 0; i < 64; ++i) {
        if (fixed[ed[i]]) continue;
        sys.residual[ed[i]] += re[i].value();
        const auto& der = re[i].derivatives();
        for (int j = 0; j < 64; ++j) vals[slots[i * 64 + j]] += der[j];
      }
    }
  }

  // lumen quads: prescribed fluxes and the surface EC equation
  {
    Eigen::Matrix<AD8, 8, 1> xe;
    Eigen::Matrix<AD8, 8, 1> re_s;
    Eigen::Matrix<AD8, 12, 1> re_f;
    for (size_t k = 0; k < lumen_geom_.size(); ++k) {
      const auto& qd = quad_dofs_[k];
      const bool endo = is_endothelium(lumen_geom_[k].tag);
      for (int i = 0; i < 8; ++i) {
        xe[i].value() = qd[i] >= 0 ? x[qd[i]] : 0.0;
        xe[i].derivatives().setZero();
        xe[i].derivatives()[i] = 1.0;
      }

      if (opt.boundary_fluxes) {
        boundary_flux_residual(lumen_geom_[k], xe, t, params_,
                               params_.release, re_f);
        for (int i = 0; i < 12; ++i) {
          const Index row = flux_rows_[k][i];
          if (fixed[row]) continue;
          sys.residual[row] += re_f[i].value();
          const auto& der = re_f[i].derivatives();
          for (int j = 0; j < 8; ++j) {
            const Index s = flux_slots_[k][i * 8 + j];
            if (s >= 0) vals[s] += der[j];
          }
        }
      }

      if (endo && opt.transport) {
        std::array<double, 4> rhoE_prev{};
        for (int a = 0; a < 4; ++a) rhoE_prev[a] = cache.x_prev[qd[a]];
        surface_ec_residual(lumen_geom_[k], xe, rhoE_prev, dt, params_, opt,
                            re_s);
        for (int i = 0; i < 4; ++i) {
          const Index row = qd[i];
          if (fixed[row]) continue;
          sys.residual[row] += re_s[i].value();
          const auto& der = re_s[i].derivatives();
          for (int j = 0; j < 8; ++j) {
            const Index s = quad_slots_[k][i * 8 + j];
            if (s >= 0) vals[s] += der[j];
          }
        }
      }
    }
  }

  // identity rows for fixed dofs
  for (Index d = 0; d < dofs_.n_dofs(); ++d)
    if (fixed[d]) vals[diag_slots_[d]] = 1.0;

  if (opt.perturb_tangent != 0.0) {
    for (Index k = 0; k < sys.J.nonZeros(); ++k)
      vals[k] *= 1.0 + opt.perturb_tangent;
  }
  return sys;
}

VecX Assembler::residual_only(const VecX& x, const StepCache& cache, double t,
                              double dt, const AssemblyOptions& opt) const {
  VecX res = VecX::Zero(dofs_.n_dofs());
  const auto& fixed = dofs_.fixed;
  {
    Eigen::Matrix<double, 64, 1> xe;
    Eigen::Matrix<double, 64, 1> re;
    for (size_t e = 0; e < hex_geom_.size(); ++e) {
      const auto& ed = hex_dofs_[e];
      for (int i = 0; i < 64; ++i) xe[i] = x[ed[i]];
      bulk_element_residual(hex_geom_[e], xe, cache.mass_prev[e], dt, params_,
                            opt, re);
      for (int i = 0; i < 64; ++i)
        if (!fixed[ed[i]]) res[ed[i]] += re[i];
    }
  }
  {
    Eigen::Matrix<double, 8, 1> xe;
    Eigen::Matrix<double, 8, 1> re_s;
    Eigen::Matrix<double, 12, 1> re_f;
    for (size_t k = 0; k < lumen_geom_.size(); ++k) {
      const auto& qd = quad_dofs_[k];
      for (int i = 0; i < 8; ++i) xe[i] = qd[i] >= 0 ? x[qd[i]] : 0.0;
      if (opt.boundary_fluxes) {
        boundary_flux_residual(lumen_geom_[k], xe, t, params_, params_.release,
                               re_f);
        for (int i = 0; i < 12; ++i)
          if (!fixed[flux_rows_[k][i]]) res[flux_rows_[k][i]] += re_f[i];
      }
      if (is_endothelium(lumen_geom_[k].tag) && opt.transport) {
        std::array<double, 4> rhoE_prev{};
        for (int a = 0; a < 4; ++a) rhoE_prev[a] = cache.x_prev[qd[a]];
        surface_ec_residual(lumen_geom_[k], xe, rhoE_prev, dt, params_, opt,
                            re_s);
        for (int i = 0; i < 4; ++i)
          if (!fixed[qd[i]]) res[qd[i]] += re_s[i];
      }
    }
  }
  return res;
}

double Assembler::referential_integral(const VecX& x, int field) const {
  double total = 0.0;
  const auto& Ntab = hex_shape_values();
  for (size_t e = 0; e < hex_geom_.size(); ++e) {
    const auto& geom = hex_geom_[e];
    const auto& ed = hex_dofs_[e];
    for (int q = 0; q < Hex8::n_qp; ++q) {
      Mat3 F = Mat3::Identity();
      for (int a = 0; a < 8; ++a)
        for (int i = 0; i < 3; ++i)
          F.row(i) += x[ed[a * 8 + i]] * geom.G[q][a].transpose();
      double phi = 0.0;
      for (int a = 0; a < 8; ++a) phi += Ntab[q][a] * x[ed[a * 8 + 3 + field]];
      total += geom.wdet[q] * F.determinant() * phi;
    }
  }
  return total;
}

std::vector<std::array<double, Hex8::n_qp>> Assembler::growth_field(
    const VecX& x) const {
  std::vector<std::array<double, Hex8::n_qp>> theta(hex_geom_.size());
  const auto& Ntab = hex_shape_values();
  for (size_t e = 0; e < hex_geom_.size(); ++e) {
    const auto& geom = hex_geom_[e];
    const auto& ed = hex_dofs_[e];
    for (int q = 0; q < Hex8::n_qp; ++q) {
      Mat3 F = Mat3::Identity();
      for (int a = 0; a < 8; ++a)
        for (int i = 0; i < 3; ++i)
          F.row(i) += x[ed[a * 8 + i]] * geom.G[q][a].transpose();
      double rho = 0.0;
      for (int a = 0; a < 8; ++a) rho += Ntab[q][a] * x[ed[a * 8 + comp_rS]];
      theta[e][q] = growth_stretch(F.determinant() * rho, params_.rho_S_eq,
                                   params_.theta_floor);
    }
  }
  return theta;
}

std::vector<std::array<double, Hex8::n_qp>> Assembler::c0C_field(
    const VecX& x) const {
  std::vector<std::array<double, Hex8::n_qp>> c0(hex_geom_.size());
  const auto& Ntab = hex_shape_values();
  for (size_t e = 0; e < hex_geom_.size(); ++e) {
    const auto& geom = hex_geom_[e];
    const auto& ed = hex_dofs_[e];
    for (int q = 0; q < Hex8::n_qp; ++q) {
      Mat3 F = Mat3::Identity();
      for (int a = 0; a < 8; ++a)
        for (int i = 0; i < 3; ++i)
          F.row(i) += x[ed[a * 8 + i]] * geom.G[q][a].transpose();
      double cc = 0.0;
      for (int a = 0; a < 8; ++a) cc += Ntab[q][a] * x[ed[a * 8 + comp_cC]];
      c0[e][q] = F.determinant() * std::max(cc, 0.0);
    }
  }
  return c0;
}

VecX initial_state(const Mesh& mesh, const DofMap& dofs, const ModelParams& p) {
  VecX x = VecX::Zero(dofs.n_dofs());
  for (Index n = 0; n < dofs.n_nodes(); ++n) {
    x[dofs.dof(n, comp_cP)] = p.ic.c_P;
    x[dofs.dof(n, comp_cT)] = p.ic.c_T;
    x[dofs.dof(n, comp_cC)] = p.ic.c_C;
    x[dofs.dof(n, comp_cD)] = p.ic.c_D;
    x[dofs.dof(n, comp_rS)] = p.ic.rho_S;
  }
  for (Index n : mesh.endothelium_nodes())
    x[dofs.dof_rE(n)] = p.ic.rho_E_denuded;
  // a node touching any healthy quad seeds healing into the denuded band
  for (Index n : mesh.healthy_endothelium_nodes())
    x[dofs.dof_rE(n)] = p.ic.rho_E_healthy;
  for (Index d = 0; d < dofs.n_dofs(); ++d)
    if (dofs.fixed[d]) x[d] = dofs.fixed_value[d];
  return x;
}

VecX dof_scales(const DofMap& dofs, const ModelParams& p) {
  const double conc = std::max({p.c_C_eq, p.B_S, 1e-15});
  const double scales[DofMap::n_groups] = {
      0.1,                        // displacement [mm]
      std::max(p.c_P_th, 1e-16),  // c_P
      std::max(p.c_T_th, 1e-17),  // c_T
      conc,                       // c_C
      std::max(p.B_S, 1e-16),     // c_D
      p.rho_S_eq,                 // rho_S
      p.rho_E_eq};                // rho_E
  VecX s(dofs.n_dofs());
  for (Index d = 0; d < dofs.n_dofs(); ++d) s[d] = scales[dofs.group_of_dof(d)];
  return s;
}

} // namespace isr
