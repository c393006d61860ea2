#include "isr/fem/dofmap.hpp"

namespace isr {

DofMap::DofMap(const Mesh& mesh) {
  n_nodes_ = mesh.n_nodes();
  surf_of_node_.assign(n_nodes_, -1);
  surf_nodes_ = mesh.endothelium_nodes();
  for (size_t i = 0; i < surf_nodes_.size(); ++i)
    surf_of_node_[surf_nodes_[i]] = static_cast<Index>(i);
  n_dofs_ = comps_per_node * n_nodes_ + static_cast<Index>(surf_nodes_.size());
  fixed.assign(n_dofs_, 0);
  fixed_value.assign(n_dofs_, 0.0);
}

int DofMap::group_of_dof(Index d) const {
  if (d >= comps_per_node * n_nodes_) return 1 + field_rE;
  const int comp = static_cast<int>(d % comps_per_node);
  return comp < 3 ? 0 : comp - 2; // u, then c_P..rho_S
}

const char* DofMap::group_name(int g) {
  static const char* names[] = {"u", "c_P", "c_T", "c_C", "c_D", "rho_S", "rho_E"};
  return names[g];
}

Index DofMap::n_free() const {
  Index n = 0;
  for (char f : fixed)
    if (!f) ++n;
  return n;
}

} // namespace isr
