#include "isr/io/vtk.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace isr {

namespace {

void write_scalar_field(std::ofstream& out, const std::string& name,
                        const std::vector<double>& values) {
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) out << v << "\n";
}

} // namespace

void write_vtk(const Mesh& mesh, const DofMap& dofs, const VecX& x,
               const std::vector<std::array<double, 8>>& theta_qp,
               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open '" + path + "'");
  out.precision(12);
  out << "# vtk DataFile Version 3.0\nrestenosis state\nASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_nodes() << " double\n";
  for (const auto& X : mesh.nodes)
    out << X[0] << " " << X[1] << " " << X[2] << "\n";
  out << "CELLS " << mesh.n_hexes() << " " << mesh.n_hexes() * 9 << "\n";
  for (const auto& h : mesh.hexes) {
    out << 8;
    for (Index n : h) out << " " << n;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.n_hexes() << "\n";
  for (Index e = 0; e < mesh.n_hexes(); ++e) out << 12 << "\n";

  out << "POINT_DATA " << mesh.n_nodes() << "\n";
  out << "VECTORS u double\n";
  for (Index n = 0; n < mesh.n_nodes(); ++n)
    out << x[dofs.dof(n, comp_ux)] << " " << x[dofs.dof(n, comp_uy)] << " "
        << x[dofs.dof(n, comp_uz)] << "\n";
  static const std::pair<const char*, int> scalars[] = {
      {"c_P", comp_cP}, {"c_T", comp_cT}, {"c_C", comp_cC},
      {"c_D", comp_cD}, {"rho_S", comp_rS}};
  for (const auto& [name, comp] : scalars) {
    std::vector<double> vals(mesh.n_nodes());
    for (Index n = 0; n < mesh.n_nodes(); ++n) vals[n] = x[dofs.dof(n, comp)];
    write_scalar_field(out, name, vals);
  }

  out << "CELL_DATA " << mesh.n_hexes() << "\n";
  {
    std::vector<double> vals(mesh.n_hexes());
    for (Index e = 0; e < mesh.n_hexes(); ++e) {
      double s = 0.0;
      for (double v : theta_qp[e]) s += v;
      vals[e] = s / 8.0;
    }
    write_scalar_field(out, "theta", vals);
  }

  // companion surface block: lumen quads with the endothelial density
  std::ofstream surf(path + ".surf.vtk");
  if (!surf)
    throw std::runtime_error("write_vtk: cannot open '" + path + ".surf.vtk'");
  surf.precision(12);
  std::map<Index, Index> remap;
  std::vector<Index> surf_nodes;
  Index n_lumen_quads = 0;
  for (const auto& q : mesh.quads) {
    if (!is_lumen(q.tag)) continue;
    ++n_lumen_quads;
    for (Index n : q.nodes)
      if (!remap.count(n)) {
        remap[n] = static_cast<Index>(surf_nodes.size());
        surf_nodes.push_back(n);
      }
  }
  surf << "# vtk DataFile Version 3.0\nlumen surface state\nASCII\n"
       << "DATASET UNSTRUCTURED_GRID\n";
  surf << "POINTS " << surf_nodes.size() << " double\n";
  for (Index n : surf_nodes)
    surf << mesh.nodes[n][0] << " " << mesh.nodes[n][1] << " "
         << mesh.nodes[n][2] << "\n";
  surf << "CELLS " << n_lumen_quads << " " << n_lumen_quads * 5 << "\n";
  for (const auto& q : mesh.quads) {
    if (!is_lumen(q.tag)) continue;
    surf << 4;
    for (Index n : q.nodes) surf << " " << remap[n];
    surf << "\n";
  }
  surf << "CELL_TYPES " << n_lumen_quads << "\n";
  for (Index k = 0; k < n_lumen_quads; ++k) surf << 9 << "\n";
  surf << "POINT_DATA " << surf_nodes.size() << "\n";
  {
    std::vector<double> vals;
    vals.reserve(surf_nodes.size());
    for (Index n : surf_nodes)
      vals.push_back(dofs.surface_index(n) >= 0 ? x[dofs.dof_rE(n)] : 0.0);
    write_scalar_field(surf, "rho_E", vals);
  }
}

VtkSummary read_vtk_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("read_vtk_summary: cannot open '" + path + "'");
  VtkSummary s;
  std::string line;
  bool in_cell_data = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "POINTS") ls >> s.n_points;
    else if (word == "CELLS") ls >> s.n_cells;
    else if (word == "CELL_DATA") in_cell_data = true;
    else if (word == "POINT_DATA") in_cell_data = false;
    else if (word == "SCALARS" || word == "VECTORS") {
      std::string name;
      ls >> name;
      (in_cell_data ? s.cell_fields : s.point_fields).push_back(name);
    }
  }
  return s;
}

} // namespace isr
