// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "wginv/error.hpp"
#include "wginv/linalg.hpp"
#include "wginv/parallel.hpp"
#include "wginv/quadrature.hpp"

namespace wginv
{

namespace
{
constexpr cplx I{0.0, 1.0};

struct Prepared
{
  AssembledSystem system;
  std::unique_ptr<Factorization> lu;
  DtnPair dtn;
  int M = 0;
};

Prepared prepare(const Mesh &mesh, const GeometrySpec &spec, double k, const ScatteringOptions &options,
                 BcKind symmetry_bc)
{
  check_wavenumber(k);
  if (mesh.order != options.order)
  {
    fail(ErrorCode::InvalidArgument, "mesh order differs from the requested element order");
  }
  Prepared p;
  p.M = options.M >= 0 ? options.M : default_truncation(spec.wall_bc, k);
  DtnTruncation d{p.M, Side::Left, spec.wall_bc, k, options.eta};
  p.dtn.left = d;
  if (!mesh.sigma_plus.empty())
  {
    d.side = Side::Right;
    p.dtn.right = d;
  }
  AssemblyOptions ao;
  ao.wall_bc = spec.wall_bc;
  ao.symmetry_bc = symmetry_bc;
  p.system = assemble_helmholtz(mesh, k, options.eta, p.dtn, std::nullopt, ao);
  p.lu = factorize(p.system.matrix, options.backend);
  return p;
}

std::vector<int> propagating_modes(BcKind bc, double k)
{
  std::vector<int> m;
  for (int n = first_index(bc); n <= highest_propagating_index(k); ++n) m.push_back(n);
  return m;
}

ScatteringSolution extract(const Prepared &p, const std::shared_ptr<const Mesh> &mesh, const GeometrySpec &spec,
                           double k, IncidentWave inc, const ScatteringOptions &options)
{
  const DtnTruncation &din = inc.side == Side::Left ? *p.dtn.left : *p.dtn.right;
  const CVec rhs = incident_rhs(p.system, *mesh, din, inc);
  SolveInfo info;
  const CVec x = solve_factored(*p.lu, p.system.matrix, rhs, &info);

  ScatteringSolution s;
  s.k = k;
  s.incident = inc;
  s.mesh = mesh;
  s.field = p.system.to_nodes(x);
  s.modes = propagating_modes(spec.wall_bc, k);
  s.M_used = p.M;
  s.rcond = info.rcond;
  s.trapped_mode_warning = info.near_singular;

  const BcKind bc = spec.wall_bc;
  auto b = [&](int n) { return beta_dissipative(bc, k, options.eta, n); };
  const cplx bn = b(inc.mode);
  const bool from_left = inc.side == Side::Left;
  const SigmaOverlaps &in = from_left ? *p.system.left : *p.system.right;
  const SigmaOverlaps *out = from_left ? (p.system.right ? &*p.system.right : nullptr) : &*p.system.left;
  const double xin = in.x;
  // Incoming wave travels towards +x from the left and towards -x from the right.
  const double sgn = from_left ? 1.0 : -1.0;
  double flux = 0.0;
  for (int q : s.modes)
  {
    const cplx bq = b(q);
    const cplx delta = q == inc.mode ? std::exp(I * sgn * bn * xin) : cplx(0.0);
    const cplx r = std::exp(I * sgn * bq * xin) * (in.project(s.field, q) - delta);
    s.reflection.push_back(r);
    flux += bq.real() / bn.real() * std::norm(r);
    if (out)
    {
      const cplx t = std::exp(-I * sgn * bq * out->x) * out->project(s.field, q);
      s.transmission.push_back(t);
      flux += bq.real() / bn.real() * std::norm(t);
    }
  }
  const std::size_t self = static_cast<std::size_t>(inc.mode - first_index(bc));
  s.R = s.reflection[self];
  s.T = out ? s.transmission[self] : cplx(0.0);
  s.energy_defect = std::abs(flux - 1.0);
  return s;
}

ScatteringOptions checked(const ScatteringOptions &o)
{
  if (!(o.target_h > 0.0 && o.target_h < 1.0))
  {
    fail(ErrorCode::InvalidArgument, "target_h must lie in (0, 1)");
  }
  if (o.order != 1 && o.order != 2)
  {
    fail(ErrorCode::InvalidArgument, "element order must be 1 or 2");
  }
  return o;
}

}  // namespace

int default_truncation(BcKind bc, double k)
{
  (void)bc;
  return std::max(10, highest_propagating_index(k) + 5);
}

std::vector<ScatteringSolution> solve_incidences(const std::shared_ptr<const Mesh> &mesh, const GeometrySpec &spec,
                                                 double k, const std::vector<IncidentWave> &incidences,
                                                 const ScatteringOptions &options)
{
  const Prepared p = prepare(*mesh, spec, k, checked(options), BcKind::Neumann);
  std::vector<ScatteringSolution> out;
  for (const IncidentWave &inc : incidences)
  {
    if (inc.side == Side::Right && !p.dtn.right)
    {
      fail(ErrorCode::InvalidArgument, "half guide has no right section");
    }
    out.push_back(extract(p, mesh, spec, k, inc, options));
  }
  return out;
}

ScatteringSolution solve_scattering(const std::shared_ptr<const Mesh> &mesh, const GeometrySpec &spec, double k,
                                    IncidentWave incident, const ScatteringOptions &options)
{
  return solve_incidences(mesh, spec, k, {incident}, options).front();
}

ScatteringSolution solve_scattering(const GeometrySpec &spec, double k, IncidentWave incident,
                                    const ScatteringOptions &options)
{
  checked(options);
  check_wavenumber(k);
  auto mesh = std::make_shared<const Mesh>(build_mesh(spec, options.target_h, options.order));
  return solve_scattering(mesh, spec, k, incident, options);
}

ScatteringMatrix scattering_matrix(const std::shared_ptr<const Mesh> &mesh, const GeometrySpec &spec, double k,
                                   const ScatteringOptions &options)
{
  if (mesh->sigma_plus.empty())
  {
    fail(ErrorCode::InvalidArgument, "scattering matrix needs both sections");
  }
  ScatteringMatrix sm;
  sm.k = k;
  sm.modes = propagating_modes(spec.wall_bc, k);
  if (sm.modes.empty())
  {
    fail(ErrorCode::BadIndex, "no propagating mode at this wavenumber");
  }
  std::vector<IncidentWave> incs;
  for (Side side : {Side::Left, Side::Right})
  {
    for (int n : sm.modes) incs.push_back({n, side});
  }
  const auto sols = solve_incidences(mesh, spec, k, incs, options);
  const int P = static_cast<int>(sm.modes.size());
  sm.S = Eigen::MatrixXcd::Zero(2 * P, 2 * P);
  auto b = [&](int j) { return beta_dissipative(spec.wall_bc, k, options.eta, sm.modes[static_cast<std::size_t>(j % P)]).real(); };
  for (int c = 0; c < 2 * P; ++c)
  {
    const ScatteringSolution &s = sols[static_cast<std::size_t>(c)];
    const bool left = c < P;
    for (int p = 0; p < P; ++p)
    {
      const int r_row = left ? p : P + p;
      const int t_row = left ? P + p : p;
      const double w = std::sqrt(b(p) / b(c));
      sm.S(r_row, c) = s.reflection[static_cast<std::size_t>(p)] * w;
      sm.S(t_row, c) = s.transmission[static_cast<std::size_t>(p)] * w;
    }
  }
  const Eigen::MatrixXcd U = sm.S * sm.S.adjoint() - Eigen::MatrixXcd::Identity(2 * P, 2 * P);
  sm.defect_unitarity = U.cwiseAbs().maxCoeff();
  sm.defect_symmetry = (sm.S - sm.S.transpose()).cwiseAbs().maxCoeff();
  return sm;
}

ScatteringMatrix scattering_matrix(const GeometrySpec &spec, double k, const ScatteringOptions &options)
{
  checked(options);
  check_wavenumber(k);
  auto mesh = std::make_shared<const Mesh>(build_mesh(spec, options.target_h, options.order));
  return scattering_matrix(mesh, spec, k, options);
}

HalfGuideCoefficients half_guide_coefficients(const GeometrySpec &spec, double k, const ScatteringOptions &options)
{
  checked(options);
  check_wavenumber(k);
  const GeometrySpec half = spec.symmetric_half ? spec : half_guide(spec);
  if (propagating_count(spec.wall_bc, k) != 1)
  {
    fail(ErrorCode::UnsupportedRegime, "half-guide decomposition requires a single propagating mode");
  }
  auto mesh = std::make_shared<const Mesh>(build_mesh(half, options.target_h, options.order));
  const IncidentWave inc{first_index(spec.wall_bc), Side::Left};
  HalfGuideCoefficients h;
  for (BcKind sym : {BcKind::Neumann, BcKind::Dirichlet})
  {
    const Prepared p = prepare(*mesh, half, k, options, sym);
    const cplx r = extract(p, mesh, half, k, inc, options).R;
    (sym == BcKind::Neumann ? h.R_N : h.R_D) = r;
  }
  h.R = 0.5 * (h.R_N + h.R_D);
  h.T = 0.5 * (h.R_N - h.R_D);
  return h;
}

std::vector<SweepRow> frequency_sweep(const GeometrySpec &spec, const std::vector<double> &ks,
                                      const ScatteringOptions &options)
{
  checked(options);
  if (!std::is_sorted(ks.begin(), ks.end()))
  {
    fail(ErrorCode::InvalidArgument, "sweep wavenumbers must be increasing");
  }
  auto mesh = std::make_shared<const Mesh>(build_mesh(spec, options.target_h, options.order));
  std::vector<SweepRow> rows(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    SweepRow &row = rows[i];
    row.k = ks[i];
    try
    {
      check_wavenumber(row.k);
      if (propagating_count(spec.wall_bc, row.k) == 0)
      {
        fail(ErrorCode::BadIndex, "no propagating mode at this wavenumber");
      }
      const int n = first_index(spec.wall_bc);
      std::vector<IncidentWave> incs{{n, Side::Left}};
      if (!mesh->sigma_plus.empty()) incs.push_back({n, Side::Right});
      const auto sols = solve_incidences(mesh, spec, row.k, incs, options);
      row.R_plus = sols[0].R;
      row.T = sols[0].T;
      row.energy_defect = sols[0].energy_defect;
      if (sols.size() > 1)
      {
        row.R_minus = sols[1].R;
        row.energy_defect = std::max(row.energy_defect, sols[1].energy_defect);
      }
    }
    catch (const Error &e)
    {
      row.error = error_name(e.code());
    }
  });
  return rows;
}

std::vector<SweepRow> frequency_sweep(const GeometrySpec &spec, double k0, double k1, int steps,
                                      const ScatteringOptions &options)
{
  if (steps < 1 || !(k1 > k0))
  {
    fail(ErrorCode::InvalidArgument, "sweep needs k1 > k0 and at least one step");
  }
  std::vector<double> ks;
  for (int i = 0; i <= steps; ++i) ks.push_back(k0 + (k1 - k0) * i / steps);
  return frequency_sweep(spec, ks, options);
}

void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows)
{
  os << "k,Re_Rp,Im_Rp,Re_Rm,Im_Rm,Re_T,Im_T,energy_defect\n" << std::setprecision(12);
  for (const SweepRow &r : rows)
  {
    os << r.k << ',';
    if (!r.error.empty())
    {
      os << "nan,nan,nan,nan,nan,nan," << r.error << '\n';
      continue;
    }
    os << r.R_plus.real() << ',' << r.R_plus.imag() << ',' << r.R_minus.real() << ',' << r.R_minus.imag() << ','
       << r.T.real() << ',' << r.T.imag() << ',' << r.energy_defect << '\n';
  }
}

cplx reflection_flux_formula(const ScatteringSolution &sol, const GeometrySpec &spec, int n)
{
  const Mesh &mesh = *sol.mesh;
  if (sol.incident.side != Side::Left)
  {
    fail(ErrorCode::InvalidArgument, "flux formula implemented for left incidence");
  }
  // J(x) = integral over the section at x of (dx u w_n^+ - u dx w_n^+) equals -2 i beta_n R_n for
  // every x in the straight lead. Averaging J against a smooth bump psi (unit mass) on
  // [x_l, x_l + a] turns it into a volume integral of element gradients.
  const cplx bn = beta(spec.wall_bc, sol.k, n);
  const double xl = mesh.x_min;
  const auto [plo, phi_] = perturbation_extent(spec);
  const double room = plo <= phi_ ? plo - xl : mesh.x_max - xl;
  const double a = std::min(0.5, 0.5 * room);
  if (!(a > 0.0))
  {
    fail(ErrorCode::GeometryInvalid, "no straight lead next to the left section");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  auto psi = [&](double x) {
    const double s = (x - xl) / a;
    return s <= 0.0 || s >= 1.0 ? 0.0 : (1.0 - std::cos(two_pi * s)) / a;
  };
  // Collapsed Gauss rule on the reference triangle, exact enough for the smooth integrand.
  const GaussRule g = gauss_legendre(8);
  cplx integral = 0.0;
  const int np = mesh.nodes_per_triangle();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto &v = mesh.triangles[t];
    double xmin = mesh.nodes[static_cast<std::size_t>(v[0])].x;
    for (int c = 1; c < 3; ++c) xmin = std::min(xmin, mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(c)])].x);
    if (xmin >= xl + a) continue;
    double gl[3][2];
    const double area = tri_geometry(mesh, t, gl);
    const auto &tn = mesh.tri_nodes[t];
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
    {
      const double s = 0.5 * (g.nodes[i] + 1.0);
      for (std::size_t j = 0; j < g.nodes.size(); ++j)
      {
        const double r = 0.5 * (g.nodes[j] + 1.0);
        const double l[3] = {1.0 - s, s * (1.0 - r), s * r};
        const double w = 0.25 * g.weights[i] * g.weights[j] * s * 2.0 * area;
        double x = 0.0, y = 0.0;
        for (int c = 0; c < 3; ++c)
        {
          x += l[c] * mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(c)])].x;
          y += l[c] * mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(c)])].y;
        }
        const double ps = psi(x);
        if (ps == 0.0) continue;
        double nv[6], gv[6][2];
        shape_and_grad(mesh.order, l, gl, nv, gv);
        cplx u = 0.0, ux = 0.0;
        for (int q = 0; q < np; ++q)
        {
          const cplx uq = sol.field[static_cast<std::size_t>(tn[static_cast<std::size_t>(q)])];
          u += nv[q] * uq;
          ux += gv[q][0] * uq;
        }
        const cplx wp = std::exp(I * bn * x) * phi(spec.wall_bc, n, y);
        integral += w * ps * (ux * wp - u * I * bn * wp);
      }
    }
  }
  return -integral / (2.0 * I * bn);
}

double l2_norm(const Mesh &mesh, const std::vector<cplx> &field)
{
  double s = 0.0;
  const int np = mesh.nodes_per_triangle();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const ElementMatrices em = element_matrices(mesh, t);
    const auto &tn = mesh.tri_nodes[t];
    for (int i = 0; i < np; ++i)
    {
      for (int j = 0; j < np; ++j)
      {
        s += em.mass(i, j) * std::real(std::conj(field[static_cast<std::size_t>(tn[static_cast<std::size_t>(i)])]) *
                                       field[static_cast<std::size_t>(tn[static_cast<std::size_t>(j)])]);
      }
    }
  }
  return std::sqrt(std::max(0.0, s));
}

}  // namespace wginv
