#ifndef ISR_MESH_HPP
#define ISR_MESH_HPP

#include "isr/types.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace isr {

/// Trilinear hexahedral bulk mesh with projected boundary quadrilaterals.
/// Immutable after construction.
struct Mesh {
  enum class Geometry { cylindrical, cartesian };

  struct SurfQuad {
    std::array<Index, 4> nodes; ///< bulk node ids, face-ordered
    SurfaceTag tag = SurfaceTag::exterior;
  };

  std::vector<Vec3> nodes; ///< referential coordinates [mm]
  std::vector<std::array<Index, 8>> hexes;
  std::vector<Layer> hex_layer;
  std::vector<SurfQuad> quads;
  std::map<std::string, std::vector<Index>> nodesets;
  Geometry geometry = Geometry::cartesian;

  Index n_nodes() const { return static_cast<Index>(nodes.size()); }
  Index n_hexes() const { return static_cast<Index>(hexes.size()); }

  /// Nodes lying on any endothelium-tagged quad.
  std::vector<Index> endothelium_nodes() const;
  /// Nodes lying on any healthy-endothelium quad.
  std::vector<Index> healthy_endothelium_nodes() const;
};

/// Geometry of the simplified stented arterial quadrant.
struct QuadrantSpec {
  double length = 16.0;     ///< [mm]
  double lumen_radius = 1.5;
  double t_media = 0.4;
  double t_adventitia = 0.3;
  int n_z = 64;
  int n_theta = 8;
  int n_r_layer = 4; ///< radial elements per layer
  double stent_z0 = 7.75;
  double stent_z1 = 8.25;
  double denuded_len = 3.5; ///< denuded band on each side of the stent
};

/// Structured two-layer quadrant with tagged luminal bands. Band edges are
/// snapped to nodal z-planes so tags stay element-aligned.
Mesh generate_quadrant(const QuadrantSpec& spec);

/// Axis-aligned box of media-layer hexes, mainly for verification problems.
/// An optional tagger overrides the default tags of boundary quads; it
/// receives the outward face axis (0..2 for -x,-y,-z, 3..5 for +x,+y,+z) and
/// the face midpoint.
Mesh make_box(int nx, int ny, int nz, double lx, double ly, double lz,
              const std::function<SurfaceTag(int axis, const Vec3&)>& tagger =
                  nullptr);

/// Orthonormal (circumferential, axial, radial) triad at a referential
/// point.
struct LocalBasis {
  Vec3 circumferential;
  Vec3 axial;
  Vec3 radial;
};

LocalBasis local_basis(const Mesh& mesh, const Vec3& X);

/// Plain-text mesh exchange format (see README for the grammar).
void export_mesh(const Mesh& mesh, const std::string& path);
Mesh import_mesh(const std::string& path);

/// Structural validation: positive Jacobians, projection property of the
/// quads, presence and consistency of the lumen tags. Throws on violation.
void check_mesh(const Mesh& mesh);

/// Referential volume by quadrature.
double mesh_volume(const Mesh& mesh);

/// Total area of quads carrying the given tag.
double tagged_area(const Mesh& mesh, SurfaceTag tag);

} // namespace isr

#endif
