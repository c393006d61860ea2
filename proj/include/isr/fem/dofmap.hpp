#ifndef ISR_FEM_DOFMAP_HPP
#define ISR_FEM_DOFMAP_HPP

#include "isr/mesh.hpp"
#include "isr/types.hpp"

#include <vector>

namespace isr {

/// Monolithic unknown layout: eight unknowns per bulk node (displacement and
/// the five bulk scalars, node-interleaved), followed by one endothelial
/// density unknown per lumen-surface node. Surface unknowns attach to bulk
/// node ids so the surface and bulk systems intertwine at shared nodes.
class DofMap {
public:
  DofMap() = default;
  explicit DofMap(const Mesh& mesh);

  Index n_nodes() const { return n_nodes_; }
  Index n_dofs() const { return n_dofs_; }
  Index n_surface_nodes() const { return static_cast<Index>(surf_nodes_.size()); }

  Index dof(Index node, int comp) const { return node * comps_per_node + comp; }

  /// Surface index of a node, or -1 if the node is not on the endothelium.
  Index surface_index(Index node) const { return surf_of_node_[node]; }
  Index dof_rE(Index node) const {
    return comps_per_node * n_nodes_ + surf_of_node_[node];
  }
  const std::vector<Index>& surface_nodes() const { return surf_nodes_; }

  /// Field group of a dof (0 = displacement, then the transport fields in
  /// Field order shifted by one). Used for per-field residual norms.
  int group_of_dof(Index d) const;
  static constexpr int n_groups = 7;
  static const char* group_name(int g);

  // Dirichlet handling: fixed dofs keep their prescribed value and their
  // rows are replaced by the identity.
  std::vector<char> fixed;
  std::vector<double> fixed_value;

  void fix(Index d, double value) {
    fixed[d] = 1;
    fixed_value[d] = value;
  }
  Index n_free() const;

private:
  Index n_nodes_ = 0;
  Index n_dofs_ = 0;
  std::vector<Index> surf_of_node_;
  std::vector<Index> surf_nodes_;
};

} // namespace isr

#endif
