#ifndef ISR_IO_CSV_HPP
#define ISR_IO_CSV_HPP

#include "isr/fem/assembler.hpp"
#include "isr/solver/timeloop.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace isr {

/// A probe resolved against the mesh: nearest bulk node, its enclosing-ish
/// element (nearest centroid) and the nearest endothelium node.
struct Probe {
  Vec3 where;
  Index node = -1;
  Index elem = -1;
  Index surf_node = -1; ///< -1 when the mesh has no endothelium
};

Probe resolve_probe(const Mesh& mesh, const Vec3& where);

/// Appends one "t,theta,c_P,c_T,c_C,c_D,rho_S,rho_E" row per probe; theta is
/// the element average at the probe element. Writes the header on first use.
class TimeseriesWriter {
public:
  TimeseriesWriter(const std::string& path, Probe probe);
  void append(const SimulationState& state, const Assembler& assembler);
  static const char* header();

private:
  std::ofstream out_;
  Probe probe_;
};

/// Lumen radius reduction along z, averaged over the circumference (positive
/// where the wall bulges into the lumen).
struct NeointimaProfile {
  std::vector<double> z;
  std::vector<double> dr;
  double peak() const;
};

NeointimaProfile neointima_profile(const Mesh& mesh, const DofMap& dofs,
                                   const VecX& x);

void write_profile_csv(const NeointimaProfile& profile, const std::string& path);

/// Mean endothelial density over the (initially) denuded band.
double mean_denuded_rhoE(const Mesh& mesh, const DofMap& dofs, const VecX& x);

} // namespace isr

#endif
