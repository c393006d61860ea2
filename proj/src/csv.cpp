#include "isr/io/csv.hpp"

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace isr {

Probe resolve_probe(const Mesh& mesh, const Vec3& where) {
  Probe p;
  p.where = where;
  double best = std::numeric_limits<double>::max();
  for (Index n = 0; n < mesh.n_nodes(); ++n) {
    const double d = (mesh.nodes[n] - where).squaredNorm();
    if (d < best) {
      best = d;
      p.node = n;
    }
  }
  best = std::numeric_limits<double>::max();
  for (Index e = 0; e < mesh.n_hexes(); ++e) {
    Vec3 c = Vec3::Zero();
    for (Index n : mesh.hexes[e]) c += 0.125 * mesh.nodes[n];
    const double d = (c - where).squaredNorm();
    if (d < best) {
      best = d;
      p.elem = e;
    }
  }
  best = std::numeric_limits<double>::max();
  for (Index n : mesh.endothelium_nodes()) {
    const double d = (mesh.nodes[n] - where).squaredNorm();
    if (d < best) {
      best = d;
      p.surf_node = n;
    }
  }
  return p;
}

const char* TimeseriesWriter::header() {
  return "t,theta,c_P,c_T,c_C,c_D,rho_S,rho_E";
}

TimeseriesWriter::TimeseriesWriter(const std::string& path, Probe probe)
    : out_(path), probe_(probe) {
  if (!out_)
    throw std::runtime_error("TimeseriesWriter: cannot open '" + path + "'");
  out_.precision(12);
  out_ << header() << "\n";
}

void TimeseriesWriter::append(const SimulationState& state,
                              const Assembler& assembler) {
  const DofMap& dofs = assembler.dofs();
  double theta = 0.0;
  for (double v : state.theta_qp[probe_.elem]) theta += v / 8.0;
  const double rhoE =
      probe_.surf_node >= 0 ? state.x[dofs.dof_rE(probe_.surf_node)] : 0.0;
  out_ << state.t << "," << theta;
  for (int c : {comp_cP, comp_cT, comp_cC, comp_cD, comp_rS})
    out_ << "," << state.x[dofs.dof(probe_.node, c)];
  out_ << "," << rhoE << "\n";
  out_.flush();
}

double NeointimaProfile::peak() const {
  double m = 0.0;
  for (double v : dr) m = std::max(m, v);
  return m;
}

NeointimaProfile neointima_profile(const Mesh& mesh, const DofMap& dofs,
                                   const VecX& x) {
  const auto it = mesh.nodesets.find("lumen");
  if (it == mesh.nodesets.end())
    throw std::runtime_error("neointima_profile: mesh has no lumen nodeset");

  // group luminal nodes by (snapped) axial station
  std::map<long, std::pair<double, std::vector<Index>>> stations;
  for (Index n : it->second) {
    const long key = std::lround(mesh.nodes[n][2] * 1e6);
    auto& st = stations[key];
    st.first = mesh.nodes[n][2];
    st.second.push_back(n);
  }

  NeointimaProfile prof;
  for (const auto& [key, st] : stations) {
    double sum = 0.0;
    for (Index n : st.second) {
      const Vec3& X = mesh.nodes[n];
      const double r0 = std::hypot(X[0], X[1]);
      const double ux = x[dofs.dof(n, comp_ux)];
      const double uy = x[dofs.dof(n, comp_uy)];
      const double r = std::hypot(X[0] + ux, X[1] + uy);
      sum += r0 - r; // positive when the lumen narrows
    }
    prof.z.push_back(st.first);
    prof.dr.push_back(sum / st.second.size());
  }
  return prof;
}

void write_profile_csv(const NeointimaProfile& profile,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("write_profile_csv: cannot open '" + path + "'");
  out.precision(12);
  out << "z,dr\n";
  for (size_t i = 0; i < profile.z.size(); ++i)
    out << profile.z[i] << "," << profile.dr[i] << "\n";
}

double mean_denuded_rhoE(const Mesh& mesh, const DofMap& dofs, const VecX& x) {
  std::set<Index> denuded;
  for (const auto& q : mesh.quads)
    if (q.tag == SurfaceTag::gamma_e_d)
      for (Index n : q.nodes) denuded.insert(n);
  if (denuded.empty()) return 0.0;
  double sum = 0.0;
  for (Index n : denuded) sum += x[dofs.dof_rE(n)];
  return sum / static_cast<double>(denuded.size());
}

} // namespace isr
