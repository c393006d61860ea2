#include "isr/verify/mms.hpp"

#include "isr/fem/assembler.hpp"
#include "isr/kinetics.hpp"
#include "isr/solver/newton.hpp"

#include <cmath>
#include <sstream>

namespace isr {

namespace {

constexpr double pi = 3.14159265358979323846;

// Parameters scaled so that the manufactured fields live at physiological
// magnitudes while every reaction and taxis term contributes at O(1) to the
// scaled residual.
ModelParams mms_params() {
  ConfigDoc doc = ConfigDoc::parse_string(R"(
[kinetics]
rho_S_eq = 1.0e3
kappa_P  = 5.0e14
eps_C    = 1.0e12
[bc]
q_P_ref = 0
q_T_ref = 0
q_D_ref = 0
l_B     = 1.0
eps_D2  = 0
t_p     = 5
t_c     = 1
)");
  return load_params(doc);
}

// One smooth positive field and its analytic gradient.
struct Manufactured {
  double base;
  double amp;
  Vec3 k;
  double operator()(const Vec3& X) const {
    return base *
           (1.0 + amp * std::sin(k[0] * X[0]) * std::cos(k[1] * X[1]) *
                      std::sin(k[2] * X[2] + 0.3));
  }
  Vec3 grad(const Vec3& X) const {
    const double sx = std::sin(k[0] * X[0]), cx = std::cos(k[0] * X[0]);
    const double sy = std::sin(k[1] * X[1]), cy = std::cos(k[1] * X[1]);
    const double sz = std::sin(k[2] * X[2] + 0.3),
                 cz = std::cos(k[2] * X[2] + 0.3);
    return base * amp *
           Vec3(k[0] * cx * cy * sz, -k[1] * sx * sy * sz, k[2] * sx * cy * cz);
  }
};

struct MmsFields {
  std::array<Manufactured, n_bulk_fields> f;

  static MmsFields make(const ModelParams& p) {
    MmsFields m;
    m.f[field_cP] = {2.0 * p.c_P_th, 0.4, Vec3(pi, pi, pi)};
    m.f[field_cT] = {2.0 * p.c_T_th, 0.4, Vec3(pi, 2 * pi, pi)};
    m.f[field_cC] = {0.5 * p.c_C_th, 0.4, Vec3(2 * pi, pi, pi)};
    m.f[field_cD] = {3.0e-15, 0.4, Vec3(pi, pi, 2 * pi)};
    m.f[field_rS] = {1.0e3, 0.4, Vec3(pi, pi, pi)};
    return m;
  }
};

// Taxis velocity of the manufactured state (the flux divided by rho_S).
Vec3 taxis_velocity_at(const MmsFields& m, const ModelParams& p,
                       const Vec3& X) {
  const double cC = m.f[field_cC](X);
  const double cP = m.f[field_cP](X);
  const double room = 1.0 - cC / p.c_C_th;
  const double fS1 = sigmoid_drop(cP, -p.l_S1, p.c_P_th);
  return p.chi_S1(Layer::media) * room * m.f[field_cP].grad(X) -
         p.chi_S2(Layer::media) * fS1 * m.f[field_cC].grad(X);
}

// Forcing that makes the manufactured fields an exact steady solution:
//   forcing_f = -div(flux_f) - rate_f  with  flux_f = D grad(phi) - rho_S a.
// The divergence is taken by fourth-order central differences of the
// analytic flux.
double mms_forcing(const MmsFields& m, const ModelParams& p, bool taxis,
                   int field, const Vec3& X) {
  const double D[n_bulk_fields] = {p.D_P, p.D_T, 0.0, p.D_D, 0.0};
  auto flux = [&](const Vec3& Y) -> Vec3 {
    Vec3 fl = D[field] * m.f[field].grad(Y);
    if (taxis && field == field_rS)
      fl -= m.f[field_rS](Y) * taxis_velocity_at(m, p, Y);
    return fl;
  };
  double div = 0.0;
  const double h = 1e-3;
  for (int i = 0; i < 3; ++i) {
    Vec3 e = Vec3::Zero();
    e[i] = h;
    div += (-flux(X + 2 * e)[i] + 8 * flux(X + e)[i] - 8 * flux(X - e)[i] +
            flux(X - 2 * e)[i]) /
           (12 * h);
  }
  const auto rate =
      bulk_rates(m.f[field_cP](X), m.f[field_cT](X), m.f[field_cC](X),
                 m.f[field_cD](X), m.f[field_rS](X), Layer::media, p);
  return -div - rate[field];
}

} // namespace

MmsResult mms_run(const MmsCase& mcase) {
  const ModelParams p = mms_params();
  const MmsFields m = MmsFields::make(p);

  MmsResult result;
  result.levels = mcase.levels;

  for (int n : mcase.levels) {
    const Mesh mesh = make_box(n, n, n, 1.0, 1.0, 1.0);
    DofMap dofs(mesh);

    // pin displacement everywhere, prescribe the manufactured values on the
    // boundary nodes of every transport field
    for (Index node = 0; node < dofs.n_nodes(); ++node)
      for (int c = 0; c < 3; ++c) dofs.fix(dofs.dof(node, c), 0.0);
    std::vector<char> on_boundary(mesh.n_nodes(), 0);
    for (const auto& q : mesh.quads)
      for (Index node : q.nodes) on_boundary[node] = 1;
    for (Index node = 0; node < dofs.n_nodes(); ++node)
      if (on_boundary[node])
        for (int f = 0; f < n_bulk_fields; ++f)
          dofs.fix(dofs.dof(node, 3 + f), m.f[f](mesh.nodes[node]));

    Assembler assembler(mesh, dofs, p);

    AssemblyOptions opt;
    opt.steady = true;
    opt.mechanics = false;
    opt.boundary_fluxes = false;
    opt.taxis = mcase.taxis;
    opt.supg = mcase.taxis;
    opt.forcing = [&](int field, const Vec3& X) {
      return mms_forcing(m, p, mcase.taxis, field, X);
    };

    // start from the interpolant of the manufactured solution
    VecX x = VecX::Zero(dofs.n_dofs());
    for (Index node = 0; node < dofs.n_nodes(); ++node)
      for (int f = 0; f < n_bulk_fields; ++f)
        x[dofs.dof(node, 3 + f)] = m.f[f](mesh.nodes[node]);
    for (Index d = 0; d < dofs.n_dofs(); ++d)
      if (dofs.fixed[d]) x[d] = dofs.fixed_value[d];

    StepCache cache = assembler.make_step_cache(x);
    NewtonOptions nopt;
    nopt.rel_tol = 1e-11;
    nopt.abs_tol = 1e-12;
    nopt.max_iter = 30;
    NewtonReport rep = newton_solve(assembler, x, cache, 0.0, 1.0, opt, nopt);
    if (!rep.converged)
      throw std::runtime_error("mms_run: Newton failed on level " +
                               std::to_string(n) + ": " + rep.message);

    // L2 errors by quadrature
    std::array<double, n_bulk_fields> err{};
    const auto& Ntab = hex_shape_values();
    for (Index e = 0; e < mesh.n_hexes(); ++e) {
      const auto& geom = assembler.hex_geometry()[e];
      for (int q = 0; q < Hex8::n_qp; ++q) {
        for (int f = 0; f < n_bulk_fields; ++f) {
          double vh = 0.0;
          for (int a = 0; a < 8; ++a)
            vh += Ntab[q][a] * x[dofs.dof(mesh.hexes[e][a], 3 + f)];
          const double d = vh - m.f[f](geom.Xq[q]);
          err[f] += geom.wdet[q] * d * d;
        }
      }
    }
    for (auto& v : err) v = std::sqrt(v);
    result.l2_error.push_back(err);
  }

  std::ostringstream table;
  table << "level";
  for (int f = 0; f < n_bulk_fields; ++f) table << "  " << field_name(f);
  table << "\n";
  for (size_t i = 0; i < result.l2_error.size(); ++i) {
    table << result.levels[i];
    for (int f = 0; f < n_bulk_fields; ++f)
      table << "  " << result.l2_error[i][f];
    table << "\n";
    if (i > 0) {
      std::array<double, n_bulk_fields> ord{};
      for (int f = 0; f < n_bulk_fields; ++f)
        ord[f] = std::log2(result.l2_error[i - 1][f] / result.l2_error[i][f]);
      result.order.push_back(ord);
      table << "order";
      for (int f = 0; f < n_bulk_fields; ++f) table << "  " << ord[f];
      table << "\n";
    }
  }
  result.table = table.str();
  return result;
}

} // namespace isr
