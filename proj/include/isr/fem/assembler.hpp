#ifndef ISR_FEM_ASSEMBLER_HPP
#define ISR_FEM_ASSEMBLER_HPP

#include "isr/fem/dofmap.hpp"
#include "isr/fem/element.hpp"
#include "isr/mesh.hpp"
#include "isr/params.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace isr {

/// Monolithic linearized system: sparse Jacobian, residual and the Dirichlet
/// mask (fixed rows carry identity and zero residual).
struct AssembledSystem {
  Eigen::SparseMatrix<double> J;
  VecX residual;
  const std::vector<char>* fixed = nullptr;
};

/// Previous-step data entering the backward-Euler mass terms.
struct StepCache {
  VecX x_prev;
  /// J_prev * phi_prev per bulk quadrature point and field.
  std::vector<std::array<std::array<double, n_bulk_fields>, Hex8::n_qp>> mass_prev;
};

/// Element-loop driver for the coupled bulk-surface system. Geometry,
/// sparsity pattern and scatter slots are built once per mesh; assembly is
/// strictly ordered so repeated runs are bitwise identical.
class Assembler {
public:
  Assembler(const Mesh& mesh, const DofMap& dofs, const ModelParams& params);

  /// Rebuild the backward-Euler history from an accepted state.
  StepCache make_step_cache(const VecX& x_prev) const;

  /// Assemble residual and Jacobian at the state x and time t (the new time
  /// level). Fixed dofs get identity rows.
  AssembledSystem assemble(const VecX& x, const StepCache& cache, double t,
                           double dt, const AssemblyOptions& opt) const;

  /// Residual only (used by line search and finite-difference harnesses).
  VecX residual_only(const VecX& x, const StepCache& cache, double t, double dt,
                     const AssemblyOptions& opt) const;

  const std::vector<HexGeom>& hex_geometry() const { return hex_geom_; }
  const DofMap& dofs() const { return dofs_; }
  const Mesh& mesh() const { return mesh_; }
  const ModelParams& params() const { return params_; }

  /// Integral of the referential density J*phi of a bulk field.
  double referential_integral(const VecX& x, int field) const;

  /// Growth stretch at every bulk quadrature point for a converged state.
  std::vector<std::array<double, Hex8::n_qp>> growth_field(const VecX& x) const;
  /// Referential ECM concentration J*c_C per quadrature point.
  std::vector<std::array<double, Hex8::n_qp>> c0C_field(const VecX& x) const;

private:
  const Mesh& mesh_;
  const DofMap& dofs_;
  const ModelParams& params_;

  std::vector<HexGeom> hex_geom_;
  std::vector<QuadGeom> lumen_geom_; ///< endothelium + stent quads
  std::vector<const Mesh::SurfQuad*> lumen_quads_;

  Eigen::SparseMatrix<double> pattern_;
  std::vector<std::array<Index, 64>> hex_dofs_;
  std::vector<std::vector<Index>> hex_slots_;  ///< 64x64 value slots
  std::vector<std::array<Index, 8>> quad_dofs_; ///< [rE x4, cD x4]
  std::vector<std::array<Index, 12>> flux_rows_; ///< [cP x4, cT x4, cD x4]
  std::vector<std::vector<Index>> quad_slots_;  ///< 8x8 surface slots
  std::vector<std::vector<Index>> flux_slots_;  ///< 12x8 flux slots
  std::vector<Index> diag_slots_;

  void build_pattern();
  Index slot(Index row, Index col) const;
};

/// Initial nodal state per the healthy-artery initial conditions and the
/// endothelial denudation map of the mesh.
VecX initial_state(const Mesh& mesh, const DofMap& dofs, const ModelParams& p);

/// Characteristic magnitude per dof group used for scaling and convergence
/// norms.
VecX dof_scales(const DofMap& dofs, const ModelParams& p);

} // namespace isr

#endif
