#include "isr/mesh.hpp"

#include "isr/fem/shape.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace isr {

namespace {

constexpr double pi = 3.14159265358979323846;

// local node ids of the six hex faces (VTK ordering)
constexpr int hex_faces[6][4] = {{0, 3, 7, 4}, {1, 2, 6, 5}, {0, 1, 5, 4},
                                 {3, 2, 6, 7}, {0, 1, 2, 3}, {4, 5, 6, 7}};

const char* tag_name(SurfaceTag t) {
  switch (t) {
    case SurfaceTag::gamma_ss: return "gamma_ss";
    case SurfaceTag::gamma_e_d: return "gamma_e_d";
    case SurfaceTag::gamma_e_h: return "gamma_e_h";
    case SurfaceTag::exterior: return "exterior";
    case SurfaceTag::ends: return "ends";
    case SurfaceTag::symmetry: return "symmetry";
  }
  return "?";
}

SurfaceTag tag_from_name(const std::string& s) {
  if (s == "gamma_ss") return SurfaceTag::gamma_ss;
  if (s == "gamma_e_d") return SurfaceTag::gamma_e_d;
  if (s == "gamma_e_h") return SurfaceTag::gamma_e_h;
  if (s == "exterior") return SurfaceTag::exterior;
  if (s == "ends") return SurfaceTag::ends;
  if (s == "symmetry") return SurfaceTag::symmetry;
  throw std::runtime_error("mesh: unknown surface tag '" + s + "'");
}

double quad_area(const Mesh& mesh, const Mesh::SurfQuad& q) {
  double area = 0.0;
  for (const auto& gp : Quad4::gauss_points()) {
    const auto dN = Quad4::shape_grad(gp[0], gp[1]);
    Vec3 t1 = Vec3::Zero(), t2 = Vec3::Zero();
    for (int a = 0; a < 4; ++a) {
      t1 += dN[a][0] * mesh.nodes[q.nodes[a]];
      t2 += dN[a][1] * mesh.nodes[q.nodes[a]];
    }
    area += t1.cross(t2).norm();
  }
  return area;
}

std::vector<Index> nodes_with_tag(const Mesh& mesh, bool healthy_only) {
  std::set<Index> s;
  for (const auto& q : mesh.quads) {
    const bool take = healthy_only ? q.tag == SurfaceTag::gamma_e_h
                                   : is_endothelium(q.tag);
    if (take)
      for (Index n : q.nodes) s.insert(n);
  }
  return {s.begin(), s.end()};
}

} // namespace

std::vector<Index> Mesh::endothelium_nodes() const {
  return nodes_with_tag(*this, false);
}
std::vector<Index> Mesh::healthy_endothelium_nodes() const {
  return nodes_with_tag(*this, true);
}

Mesh generate_quadrant(const QuadrantSpec& s) {
  if (s.length <= 0 || s.lumen_radius <= 0 || s.t_media <= 0 ||
      s.t_adventitia <= 0)
    throw std::invalid_argument("generate_quadrant: dimensions must be positive");
  if (s.n_z < 1 || s.n_theta < 1 || s.n_r_layer < 1)
    throw std::invalid_argument("generate_quadrant: degenerate subdivision");
  if (!(s.stent_z0 < s.stent_z1))
    throw std::invalid_argument("generate_quadrant: empty stent band");

  const double hz = s.length / s.n_z;
  auto snap = [&](double z) { return std::round(z / hz) * hz; };
  const double z_ss0 = snap(s.stent_z0);
  const double z_ss1 = snap(s.stent_z1);
  const double z_d0 = snap(z_ss0 - s.denuded_len);
  const double z_d1 = snap(z_ss1 + s.denuded_len);
  if (z_d0 < -1e-12 || z_d1 > s.length + 1e-12 || !(z_ss0 < z_ss1))
    throw std::invalid_argument(
        "generate_quadrant: stent/denuded bands exceed the segment");

  const int nr = 2 * s.n_r_layer;
  const int nt = s.n_theta;
  const int nz = s.n_z;

  Mesh mesh;
  mesh.geometry = Mesh::Geometry::cylindrical;
  mesh.nodes.reserve(static_cast<size_t>(nz + 1) * (nt + 1) * (nr + 1));

  std::vector<double> radii(nr + 1);
  for (int j = 0; j <= s.n_r_layer; ++j)
    radii[j] = s.lumen_radius + j * s.t_media / s.n_r_layer;
  for (int j = 1; j <= s.n_r_layer; ++j)
    radii[s.n_r_layer + j] =
        s.lumen_radius + s.t_media + j * s.t_adventitia / s.n_r_layer;

  auto node_id = [&](int iz, int it, int ir) -> Index {
    return (static_cast<Index>(iz) * (nt + 1) + it) * (nr + 1) + ir;
  };
  for (int iz = 0; iz <= nz; ++iz)
    for (int it = 0; it <= nt; ++it)
      for (int ir = 0; ir <= nr; ++ir) {
        const double th = it * (pi / 2) / nt;
        const double R = radii[ir];
        mesh.nodes.emplace_back(R * std::cos(th), R * std::sin(th), iz * hz);
      }

  // hex axes: xi = theta, eta = z, zeta = r (right-handed, positive Jacobian)
  for (int iz = 0; iz < nz; ++iz)
    for (int it = 0; it < nt; ++it)
      for (int ir = 0; ir < nr; ++ir) {
        std::array<Index, 8> h;
        h[0] = node_id(iz, it, ir);
        h[1] = node_id(iz, it + 1, ir);
        h[2] = node_id(iz + 1, it + 1, ir);
        h[3] = node_id(iz + 1, it, ir);
        h[4] = node_id(iz, it, ir + 1);
        h[5] = node_id(iz, it + 1, ir + 1);
        h[6] = node_id(iz + 1, it + 1, ir + 1);
        h[7] = node_id(iz + 1, it, ir + 1);
        mesh.hexes.push_back(h);
        mesh.hex_layer.push_back(ir < s.n_r_layer ? Layer::media
                                                  : Layer::adventitia);
      }

  auto add_quad = [&](const std::array<Index, 8>& h, int face, SurfaceTag tag) {
    Mesh::SurfQuad q;
    for (int a = 0; a < 4; ++a) q.nodes[a] = h[hex_faces[face][a]];
    q.tag = tag;
    mesh.quads.push_back(q);
  };

  const double eps = 1e-9 * s.length;
  for (int iz = 0; iz < nz; ++iz)
    for (int it = 0; it < nt; ++it)
      for (int ir = 0; ir < nr; ++ir) {
        const auto& h =
            mesh.hexes[(static_cast<size_t>(iz) * nt + it) * nr + ir];
        if (ir == 0) {
          const double zm = 0.25 * (mesh.nodes[h[0]][2] + mesh.nodes[h[1]][2] +
                                    mesh.nodes[h[2]][2] + mesh.nodes[h[3]][2]);
          SurfaceTag tag = SurfaceTag::gamma_e_h;
          if (zm > z_ss0 - eps && zm < z_ss1 + eps)
            tag = SurfaceTag::gamma_ss;
          else if (zm > z_d0 - eps && zm < z_d1 + eps)
            tag = SurfaceTag::gamma_e_d;
          add_quad(h, 4, tag);
        }
        if (ir == nr - 1) add_quad(h, 5, SurfaceTag::exterior);
        if (iz == 0) add_quad(h, 2, SurfaceTag::ends);
        if (iz == nz - 1) add_quad(h, 3, SurfaceTag::ends);
        if (it == 0) add_quad(h, 0, SurfaceTag::symmetry);
        if (it == nt - 1) add_quad(h, 1, SurfaceTag::symmetry);
      }

  auto& sets = mesh.nodesets;
  for (int iz = 0; iz <= nz; ++iz)
    for (int it = 0; it <= nt; ++it)
      for (int ir = 0; ir <= nr; ++ir) {
        const Index n = node_id(iz, it, ir);
        if (ir == 0) sets["lumen"].push_back(n);
        if (ir == nr) sets["abluminal"].push_back(n);
        if (iz == 0) sets["z0"].push_back(n);
        if (iz == nz) sets["z1"].push_back(n);
        if (it == 0) sets["theta0"].push_back(n);
        if (it == nt) sets["theta1"].push_back(n);
      }
  std::set<Index> stent_nodes;
  for (const auto& q : mesh.quads)
    if (q.tag == SurfaceTag::gamma_ss)
      for (Index n : q.nodes) stent_nodes.insert(n);
  sets["stent"] = {stent_nodes.begin(), stent_nodes.end()};

  return mesh;
}

Mesh make_box(int nx, int ny, int nz, double lx, double ly, double lz,
              const std::function<SurfaceTag(int, const Vec3&)>& tagger) {
  if (nx < 1 || ny < 1 || nz < 1 || lx <= 0 || ly <= 0 || lz <= 0)
    throw std::invalid_argument("make_box: invalid dimensions");
  Mesh mesh;
  mesh.geometry = Mesh::Geometry::cartesian;
  auto node_id = [&](int i, int j, int k) -> Index {
    return (static_cast<Index>(k) * (ny + 1) + j) * (nx + 1) + i;
  };
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.nodes.emplace_back(i * lx / nx, j * ly / ny, k * lz / nz);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        std::array<Index, 8> h = {node_id(i, j, k),         node_id(i + 1, j, k),
                                  node_id(i + 1, j + 1, k), node_id(i, j + 1, k),
                                  node_id(i, j, k + 1),     node_id(i + 1, j, k + 1),
                                  node_id(i + 1, j + 1, k + 1),
                                  node_id(i, j + 1, k + 1)};
        mesh.hexes.push_back(h);
        mesh.hex_layer.push_back(Layer::media);

        auto add = [&](int face, int axis) {
          Mesh::SurfQuad q;
          Vec3 mid = Vec3::Zero();
          for (int a = 0; a < 4; ++a) {
            q.nodes[a] = h[hex_faces[face][a]];
            mid += 0.25 * mesh.nodes[q.nodes[a]];
          }
          q.tag = tagger ? tagger(axis, mid) : SurfaceTag::exterior;
          mesh.quads.push_back(q);
        };
        if (i == 0) add(0, 0);
        if (i == nx - 1) add(1, 3);
        if (j == 0) add(2, 1);
        if (j == ny - 1) add(3, 4);
        if (k == 0) add(4, 2);
        if (k == nz - 1) add(5, 5);
      }
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        const Index n = node_id(i, j, k);
        if (i == 0) mesh.nodesets["x0"].push_back(n);
        if (i == nx) mesh.nodesets["x1"].push_back(n);
        if (j == 0) mesh.nodesets["y0"].push_back(n);
        if (j == ny) mesh.nodesets["y1"].push_back(n);
        if (k == 0) mesh.nodesets["z0"].push_back(n);
        if (k == nz) mesh.nodesets["z1"].push_back(n);
      }
  return mesh;
}

LocalBasis local_basis(const Mesh& mesh, const Vec3& X) {
  if (mesh.geometry == Mesh::Geometry::cartesian)
    return {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  const double R = std::hypot(X[0], X[1]);
  if (R < 1e-12)
    throw std::domain_error("local_basis: point on the cylinder axis");
  const Vec3 radial(X[0] / R, X[1] / R, 0.0);
  const Vec3 circumferential(-X[1] / R, X[0] / R, 0.0);
  return {circumferential, Vec3::UnitZ(), radial};
}

void export_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_mesh: cannot open '" + path + "'");
  out.precision(17);
  out << "isrmesh 1 "
      << (mesh.geometry == Mesh::Geometry::cylindrical ? "cylindrical"
                                                       : "cartesian")
      << "\n";
  out << "nodes " << mesh.nodes.size() << "\n";
  for (const auto& x : mesh.nodes) out << x[0] << " " << x[1] << " " << x[2] << "\n";
  out << "hexes " << mesh.hexes.size() << "\n";
  for (size_t e = 0; e < mesh.hexes.size(); ++e) {
    for (Index n : mesh.hexes[e]) out << n << " ";
    out << (mesh.hex_layer[e] == Layer::media ? "media" : "adventitia") << "\n";
  }
  out << "quads " << mesh.quads.size() << "\n";
  for (const auto& q : mesh.quads) {
    for (Index n : q.nodes) out << n << " ";
    out << tag_name(q.tag) << "\n";
  }
  for (const auto& [name, ids] : mesh.nodesets) {
    out << "nodeset " << name << " " << ids.size() << "\n";
    for (Index n : ids) out << n << "\n";
  }
  out << "end\n";
}

Mesh import_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("import_mesh: cannot open '" + path + "'");
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("import_mesh: " + msg + " in '" + path + "'");
  };

  Mesh mesh;
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "isrmesh" || version != 1)
    fail("bad header (expected 'isrmesh 1')");
  if (!(in >> word)) fail("missing geometry kind");
  if (word == "cylindrical")
    mesh.geometry = Mesh::Geometry::cylindrical;
  else if (word == "cartesian")
    mesh.geometry = Mesh::Geometry::cartesian;
  else
    fail("unknown geometry '" + word + "'");

  size_t n = 0;
  if (!(in >> word >> n) || word != "nodes") fail("expected node block");
  mesh.nodes.resize(n);
  for (auto& x : mesh.nodes)
    if (!(in >> x[0] >> x[1] >> x[2])) fail("truncated node block");

  if (!(in >> word >> n) || word != "hexes") fail("expected hex block");
  mesh.hexes.resize(n);
  mesh.hex_layer.resize(n);
  for (size_t e = 0; e < n; ++e) {
    for (auto& id : mesh.hexes[e]) {
      if (!(in >> id)) fail("truncated hex block");
      if (id < 0 || id >= mesh.n_nodes()) fail("hex node id out of range");
    }
    if (!(in >> word)) fail("missing hex layer");
    if (word == "media")
      mesh.hex_layer[e] = Layer::media;
    else if (word == "adventitia")
      mesh.hex_layer[e] = Layer::adventitia;
    else
      fail("unknown layer '" + word + "'");
  }

  if (!(in >> word >> n) || word != "quads") fail("expected quad block");
  mesh.quads.resize(n);
  for (auto& q : mesh.quads) {
    for (auto& id : q.nodes) {
      if (!(in >> id)) fail("truncated quad block");
      if (id < 0 || id >= mesh.n_nodes()) fail("quad node id out of range");
    }
    if (!(in >> word)) fail("missing quad tag");
    q.tag = tag_from_name(word);
  }

  while (in >> word) {
    if (word == "end") break;
    if (word != "nodeset") fail("unexpected token '" + word + "'");
    std::string name;
    if (!(in >> name >> n)) fail("malformed nodeset header");
    auto& ids = mesh.nodesets[name];
    ids.resize(n);
    for (auto& id : ids) {
      if (!(in >> id)) fail("truncated nodeset");
      if (id < 0 || id >= mesh.n_nodes()) fail("nodeset id out of range");
    }
  }

  check_mesh(mesh);
  return mesh;
}

void check_mesh(const Mesh& mesh) {
  if (mesh.hexes.size() != mesh.hex_layer.size())
    throw std::runtime_error("check_mesh: layer tags do not match elements");

  // positive Jacobians at all quadrature points
  const auto qps = Hex8::gauss_points();
  for (size_t e = 0; e < mesh.hexes.size(); ++e)
    for (const auto& xi : qps) {
      const auto dN = Hex8::shape_grad(xi);
      Mat3 J = Mat3::Zero();
      for (int a = 0; a < 8; ++a)
        J += mesh.nodes[mesh.hexes[e][a]] * dN[a].transpose();
      if (J.determinant() <= 0.0)
        throw std::runtime_error("check_mesh: non-positive Jacobian in hex " +
                                 std::to_string(e));
    }

  // each boundary quad must coincide with a face of exactly one hex
  std::map<std::array<Index, 4>, int> face_count;
  auto face_key = [](std::array<Index, 4> f) {
    std::sort(f.begin(), f.end());
    return f;
  };
  for (const auto& h : mesh.hexes)
    for (const auto& f : hex_faces) {
      std::array<Index, 4> key = {h[f[0]], h[f[1]], h[f[2]], h[f[3]]};
      ++face_count[face_key(key)];
    }
  bool has_endothelium = false;
  for (const auto& q : mesh.quads) {
    const auto it = face_count.find(face_key(q.nodes));
    if (it == face_count.end() || it->second != 1)
      throw std::runtime_error(
          "check_mesh: quad is not the projection of a unique boundary hex "
          "face");
    if (is_endothelium(q.tag)) has_endothelium = true;
  }
  if (!has_endothelium)
    throw std::runtime_error("check_mesh: no endothelium (gamma_e_*) tags");

  // lumen tags must not overlap
  std::set<std::array<Index, 4>> lumen_faces;
  for (const auto& q : mesh.quads)
    if (is_lumen(q.tag))
      if (!lumen_faces.insert(face_key(q.nodes)).second)
        throw std::runtime_error("check_mesh: duplicate lumen quad");
}

double mesh_volume(const Mesh& mesh) {
  double vol = 0.0;
  const auto qps = Hex8::gauss_points();
  for (const auto& h : mesh.hexes)
    for (const auto& xi : qps) {
      const auto dN = Hex8::shape_grad(xi);
      Mat3 J = Mat3::Zero();
      for (int a = 0; a < 8; ++a) J += mesh.nodes[h[a]] * dN[a].transpose();
      vol += J.determinant();
    }
  return vol;
}

double tagged_area(const Mesh& mesh, SurfaceTag tag) {
  double area = 0.0;
  for (const auto& q : mesh.quads)
    if (q.tag == tag) area += quad_area(mesh, q);
  return area;
}

} // namespace isr
