#ifndef ISR_IO_VTK_HPP
#define ISR_IO_VTK_HPP

#include "isr/fem/dofmap.hpp"
#include "isr/mesh.hpp"

#include <string>
#include <vector>

namespace isr {

/// Legacy-VTK unstructured-grid dump of the bulk state (point data: the
/// displacement and the five bulk fields; cell data: element-averaged growth
/// stretch) plus a companion "<path>.surf.vtk" with the lumen quads and the
/// endothelial density.
void write_vtk(const Mesh& mesh, const DofMap& dofs, const VecX& x,
               const std::vector<std::array<double, 8>>& theta_qp,
               const std::string& path);

/// Minimal reader used to audit written files: counts and field names.
struct VtkSummary {
  Index n_points = 0;
  Index n_cells = 0;
  std::vector<std::string> point_fields;
  std::vector<std::string> cell_fields;
};

VtkSummary read_vtk_summary(const std::string& path);

} // namespace isr

#endif
