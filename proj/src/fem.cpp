// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/fem.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>

#include "wginv/error.hpp"

namespace wginv
{

namespace
{
constexpr cplx I{0.0, 1.0};

// Symmetric 6-point rule, exact for degree 4 on the reference triangle.
struct TriRule
{
  double l[6][3];
  double w[6];
};

TriRule make_rule()
{
  const double a = 0.445948490915965, wa = 0.223381589678011;
  const double b = 0.091576213509771, wb = 0.109951743655322;
  TriRule r{};
  const double pts[6][3] = {{a, a, 1 - 2 * a}, {a, 1 - 2 * a, a}, {1 - 2 * a, a, a},
                            {b, b, 1 - 2 * b}, {b, 1 - 2 * b, b}, {1 - 2 * b, b, b}};
  for (int q = 0; q < 6; ++q)
  {
    for (int c = 0; c < 3; ++c) r.l[q][c] = pts[q][c];
    r.w[q] = q < 3 ? wa : wb;
  }
  return r;
}

const TriRule &rule()
{
  static const TriRule r = make_rule();
  return r;
}

std::vector<char> constrained_nodes(const Mesh &mesh, BcKind wall_bc, BcKind symmetry_bc, bool ends)
{
  std::vector<char> mask(mesh.nodes.size(), 0);
  for (const BoundaryEdge &e : mesh.boundary)
  {
    bool fix = false;
    switch (e.tag)
    {
      case BoundaryTag::WallGamma: fix = wall_bc == BcKind::Dirichlet; break;
      case BoundaryTag::SymmetryPlane: fix = symmetry_bc == BcKind::Dirichlet; break;
      default: fix = ends; break;
    }
    if (fix)
    {
      mask[static_cast<std::size_t>(e.a)] = 1;
      mask[static_cast<std::size_t>(e.b)] = 1;
      if (e.mid >= 0) mask[static_cast<std::size_t>(e.mid)] = 1;
    }
  }
  return mask;
}

DofMap make_dofs(const std::vector<char> &mask)
{
  DofMap d;
  d.node_to_dof.assign(mask.size(), -1);
  for (std::size_t i = 0; i < mask.size(); ++i)
  {
    if (!mask[i])
    {
      d.node_to_dof[i] = static_cast<int>(d.dof_to_node.size());
      d.dof_to_node.push_back(static_cast<int>(i));
    }
  }
  return d;
}

}  // namespace

void shape_and_grad(int order, const double l[3], const double gl[3][2], double n[6], double g[6][2])
{
  if (order == 1)
  {
    for (int i = 0; i < 3; ++i)
    {
      n[i] = l[i];
      g[i][0] = gl[i][0];
      g[i][1] = gl[i][1];
    }
    return;
  }
  for (int i = 0; i < 3; ++i)
  {
    n[i] = l[i] * (2.0 * l[i] - 1.0);
    g[i][0] = (4.0 * l[i] - 1.0) * gl[i][0];
    g[i][1] = (4.0 * l[i] - 1.0) * gl[i][1];
  }
  const int e[3][2] = {{0, 1}, {1, 2}, {2, 0}};
  for (int m = 0; m < 3; ++m)
  {
    const int i = e[m][0], j = e[m][1];
    n[3 + m] = 4.0 * l[i] * l[j];
    g[3 + m][0] = 4.0 * (l[j] * gl[i][0] + l[i] * gl[j][0]);
    g[3 + m][1] = 4.0 * (l[j] * gl[i][1] + l[i] * gl[j][1]);
  }
}

double tri_geometry(const Mesh &mesh, std::size_t t, double gl[3][2])
{
  const auto &v = mesh.triangles[t];
  const Point &p0 = mesh.nodes[static_cast<std::size_t>(v[0])];
  const Point &p1 = mesh.nodes[static_cast<std::size_t>(v[1])];
  const Point &p2 = mesh.nodes[static_cast<std::size_t>(v[2])];
  const double twice = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  const Point *p[3] = {&p0, &p1, &p2};
  for (int i = 0; i < 3; ++i)
  {
    const Point &a = *p[(i + 1) % 3], &b = *p[(i + 2) % 3];
    gl[i][0] = (a.y - b.y) / twice;
    gl[i][1] = (b.x - a.x) / twice;
  }
  return 0.5 * twice;
}

std::array<cplx, 3> moment_exp(double a)
{
  std::array<cplx, 3> out{};
  if (std::abs(a) < 2.0)
  {
    // Series: sum_m (i a)^m / (m! (j + m + 1)).
    cplx term = 1.0;
    for (int m = 0; m < 60; ++m)
    {
      for (int j = 0; j < 3; ++j) out[static_cast<std::size_t>(j)] += term / static_cast<double>(j + m + 1);
      term *= I * a / static_cast<double>(m + 1);
      if (std::abs(term) < 1e-300) break;
    }
    return out;
  }
  const cplx e = std::exp(I * a), ia = I * a;
  out[0] = (e - 1.0) / ia;
  out[1] = (e - out[0]) / ia;
  out[2] = (e - 2.0 * out[1]) / ia;
  return out;
}

cplx SigmaOverlaps::project(const std::vector<cplx> &field, int n) const
{
  const int col = n - first;
  cplx s = 0.0;
  for (std::size_t r = 0; r < nodes.size(); ++r)
  {
    s += B(static_cast<Eigen::Index>(r), col) * field[static_cast<std::size_t>(nodes[r])];
  }
  return s;
}

SigmaOverlaps sigma_overlaps(const Mesh &mesh, Side side, BcKind bc, int M)
{
  SigmaOverlaps ov;
  ov.bc = bc;
  ov.first = first_index(bc);
  ov.M = M;
  ov.x = side == Side::Left ? mesh.x_min : mesh.x_max;
  const std::vector<int> &edges = side == Side::Left ? mesh.sigma_minus : mesh.sigma_plus;
  if (edges.empty())
  {
    fail(ErrorCode::GeometryInvalid, "mesh has no artificial section on the requested side");
  }
  std::map<int, int> row;
  for (int ei : edges)
  {
    const BoundaryEdge &e = mesh.boundary[static_cast<std::size_t>(ei)];
    for (int nd : {e.a, e.mid, e.b})
    {
      if (nd >= 0 && !row.count(nd)) row[nd] = 0;
    }
  }
  std::vector<std::pair<double, int>> sorted;
  for (const auto &[nd, r] : row) sorted.push_back({mesh.nodes[static_cast<std::size_t>(nd)].y, nd});
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t r = 0; r < sorted.size(); ++r)
  {
    ov.nodes.push_back(sorted[r].second);
    row[sorted[r].second] = static_cast<int>(r);
  }
  const int nmodes = M - ov.first + 1;
  ov.B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ov.nodes.size()), nmodes);
  const double pi = std::numbers::pi;
  for (int ei : edges)
  {
    const BoundaryEdge &e = mesh.boundary[static_cast<std::size_t>(ei)];
    const double ya = mesh.nodes[static_cast<std::size_t>(e.a)].y, yb = mesh.nodes[static_cast<std::size_t>(e.b)].y;
    const double len = yb - ya;
    for (int n = ov.first; n <= M; ++n)
    {
      // t-moments of phi_n along the edge.
      double mom[3];
      if (n == 0)
      {
        mom[0] = 1.0;
        mom[1] = 0.5;
        mom[2] = 1.0 / 3.0;
      }
      else
      {
        const auto im = moment_exp(n * pi * len);
        const cplx ph = std::exp(I * (n * pi * ya));
        for (int j = 0; j < 3; ++j)
        {
          const cplx v = ph * im[static_cast<std::size_t>(j)];
          mom[j] = std::numbers::sqrt2 * (bc == BcKind::Dirichlet ? v.imag() : v.real());
        }
      }
      const int col = n - ov.first;
      if (mesh.order == 2)
      {
        ov.B(row[e.a], col) += len * (mom[0] - 3.0 * mom[1] + 2.0 * mom[2]);
        ov.B(row[e.mid], col) += len * (4.0 * mom[1] - 4.0 * mom[2]);
        ov.B(row[e.b], col) += len * (-mom[1] + 2.0 * mom[2]);
      }
      else
      {
        ov.B(row[e.a], col) += len * (mom[0] - mom[1]);
        ov.B(row[e.b], col) += len * mom[1];
      }
    }
  }
  return ov;
}

std::vector<cplx> AssembledSystem::to_nodes(const CVec &x) const
{
  std::vector<cplx> out(dof_map.node_to_dof.size(), 0.0);
  for (int d = 0; d < dof_map.size(); ++d)
  {
    out[static_cast<std::size_t>(dof_map.dof_to_node[static_cast<std::size_t>(d)])] = x(d);
  }
  return out;
}

ElementMatrices element_matrices(const Mesh &mesh, std::size_t t)
{
  ElementMatrices em;
  em.sxx.setZero();
  em.syy.setZero();
  em.mass.setZero();
  double gl[3][2];
  const double area = tri_geometry(mesh, t, gl);
  const int np = mesh.nodes_per_triangle();
  const TriRule &r = rule();
  for (int q = 0; q < 6; ++q)
  {
    double n[6], g[6][2];
    shape_and_grad(mesh.order, r.l[q], gl, n, g);
    const double w = r.w[q] * area;
    for (int i = 0; i < np; ++i)
    {
      for (int j = 0; j < np; ++j)
      {
        em.sxx(i, j) += w * g[i][0] * g[j][0];
        em.syy(i, j) += w * g[i][1] * g[j][1];
        em.mass(i, j) += w * n[i] * n[j];
      }
    }
  }
  return em;
}

AssembledSystem assemble_helmholtz(const Mesh &mesh, double k, double eta, const DtnPair &dtn,
                                   const std::optional<IncidentWave> &incident, const AssemblyOptions &options)
{
  if (!(k > 0.0))
  {
    fail(ErrorCode::InvalidArgument, "k must be positive");
  }
  if (eta < 0.0)
  {
    fail(ErrorCode::InvalidArgument, "dissipation must be non-negative");
  }
  AssembledSystem sys;
  sys.dirichlet_mask = constrained_nodes(mesh, options.wall_bc, options.symmetry_bc, false);
  sys.dof_map = make_dofs(sys.dirichlet_mask);
  const int n = sys.dof_map.size();
  const auto &dof = sys.dof_map.node_to_dof;
  const cplx kappa2(k * k, k * eta);
  const int np = mesh.nodes_per_triangle();

  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(mesh.triangles.size() * static_cast<std::size_t>(np * np));
  sys.rhs = CVec::Zero(n);
  const TriRule &r = rule();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const ElementMatrices em = element_matrices(mesh, t);
    const cplx mcoef = kappa2 * mesh.gamma[t];
    const auto &tn = mesh.tri_nodes[t];
    for (int i = 0; i < np; ++i)
    {
      const int di = dof[static_cast<std::size_t>(tn[static_cast<std::size_t>(i)])];
      if (di < 0) continue;
      for (int j = 0; j < np; ++j)
      {
        const int dj = dof[static_cast<std::size_t>(tn[static_cast<std::size_t>(j)])];
        if (dj < 0) continue;
        trip.emplace_back(di, dj, em.sxx(i, j) + em.syy(i, j) - mcoef * em.mass(i, j));
      }
    }
    if (options.source)
    {
      double gl[3][2];
      const double area = tri_geometry(mesh, t, gl);
      const auto &v = mesh.triangles[t];
      for (int q = 0; q < 6; ++q)
      {
        double nn[6], g[6][2];
        shape_and_grad(mesh.order, r.l[q], gl, nn, g);
        double x = 0.0, y = 0.0;
        for (int c = 0; c < 3; ++c)
        {
          x += r.l[q][c] * mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(c)])].x;
          y += r.l[q][c] * mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(c)])].y;
        }
        const cplx f = options.source(x, y) * (r.w[q] * area);
        for (int i = 0; i < np; ++i)
        {
          const int di = dof[static_cast<std::size_t>(tn[static_cast<std::size_t>(i)])];
          if (di >= 0) sys.rhs(di) += f * nn[i];
        }
      }
    }
  }

  auto add_dtn = [&](const DtnTruncation &d, Side side) {
    const int N = highest_propagating_index(d.k);
    if (d.M <= N || d.M < first_index(d.bc))
    {
      fail(ErrorCode::TruncationTooSmall, "DtN truncation M must exceed the highest propagating index");
    }
    SigmaOverlaps ov = sigma_overlaps(mesh, side, d.bc, d.M);
    for (int m = ov.first; m <= d.M; ++m)
    {
      const cplx coef = -I * beta_dissipative(d.bc, d.k, d.eta, m);
      const int col = m - ov.first;
      for (std::size_t p = 0; p < ov.nodes.size(); ++p)
      {
        const int dp = dof[static_cast<std::size_t>(ov.nodes[p])];
        const double bp = ov.B(static_cast<Eigen::Index>(p), col);
        if (dp < 0 || bp == 0.0) continue;
        for (std::size_t q = 0; q < ov.nodes.size(); ++q)
        {
          const int dq = dof[static_cast<std::size_t>(ov.nodes[q])];
          const double bq = ov.B(static_cast<Eigen::Index>(q), col);
          if (dq < 0 || bq == 0.0) continue;
          trip.emplace_back(dp, dq, coef * bp * bq);
        }
      }
    }
    if (side == Side::Left) sys.left = std::move(ov);
    else sys.right = std::move(ov);
  };
  if (dtn.left) add_dtn(*dtn.left, Side::Left);
  if (dtn.right) add_dtn(*dtn.right, Side::Right);

  if (incident)
  {
    const std::optional<DtnTruncation> &d = incident->side == Side::Left ? dtn.left : dtn.right;
    if (!d)
    {
      fail(ErrorCode::InvalidArgument, "incident wave requires a DtN condition on the inflow section");
    }
    sys.rhs += incident_rhs(sys, mesh, *d, *incident);
  }

  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  return sys;
}

cplx ScalingCoefficients::at(double x) const
{
  if (std::abs(x) < L)
  {
    return 1.0;
  }
  const cplx down = std::exp(cplx(0.0, -theta));
  if (!conjugated)
  {
    return down;
  }
  return x < 0.0 ? std::conj(down) : down;
}

ScaledOperators assemble_scaled(const Mesh &mesh, const ScalingCoefficients &scaling, BcKind wall_bc)
{
  ScaledOperators ops;
  const std::vector<char> mask = constrained_nodes(mesh, wall_bc, BcKind::Neumann, true);
  ops.dof_map = make_dofs(mask);
  const int n = ops.dof_map.size();
  const auto &dof = ops.dof_map.node_to_dof;
  const int np = mesh.nodes_per_triangle();
  std::vector<Eigen::Triplet<cplx>> tk, tm;
  tk.reserve(mesh.triangles.size() * static_cast<std::size_t>(np * np));
  tm.reserve(tk.capacity());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto &v = mesh.triangles[t];
    double xc = 0.0;
    for (int c = 0; c < 3; ++c) xc += mesh.nodes[static_cast<std::size_t>(v[static_cast<std::size_t>(c)])].x / 3.0;
    const cplx c = scaling.at(xc);
    const ElementMatrices em = element_matrices(mesh, t);
    const auto &tn = mesh.tri_nodes[t];
    for (int i = 0; i < np; ++i)
    {
      const int di = dof[static_cast<std::size_t>(tn[static_cast<std::size_t>(i)])];
      if (di < 0) continue;
      for (int j = 0; j < np; ++j)
      {
        const int dj = dof[static_cast<std::size_t>(tn[static_cast<std::size_t>(j)])];
        if (dj < 0) continue;
        tk.emplace_back(di, dj, c * em.sxx(i, j) + em.syy(i, j) / c);
        tm.emplace_back(di, dj, mesh.gamma[t] / c * em.mass(i, j));
      }
    }
  }
  ops.K.resize(n, n);
  ops.K.setFromTriplets(tk.begin(), tk.end());
  ops.K.makeCompressed();
  ops.M.resize(n, n);
  ops.M.setFromTriplets(tm.begin(), tm.end());
  ops.M.makeCompressed();
  return ops;
}

CVec incident_rhs(const AssembledSystem &sys, const Mesh &mesh, const DtnTruncation &d, const IncidentWave &inc)
{
  const std::optional<SigmaOverlaps> &ov = inc.side == Side::Left ? sys.left : sys.right;
  if (!ov)
  {
    fail(ErrorCode::InvalidArgument, "incident wave requires a DtN condition on the inflow section");
  }
  const int nm = inc.mode;
  if (nm < first_index(d.bc) || nm > highest_propagating_index(d.k) || nm > d.M)
  {
    fail(ErrorCode::BadIndex, "incident mode must be propagating");
  }
  const cplx b = beta_dissipative(d.bc, d.k, d.eta, nm);
  const double xs = inc.side == Side::Left ? mesh.x_min : mesh.x_max;
  const double sgn = inc.side == Side::Left ? 1.0 : -1.0;
  const cplx coef = -2.0 * I * b * std::exp(I * sgn * b * xs);
  CVec rhs = CVec::Zero(sys.dof_map.size());
  const auto &dof = sys.dof_map.node_to_dof;
  for (std::size_t p = 0; p < ov->nodes.size(); ++p)
  {
    const int dp = dof[static_cast<std::size_t>(ov->nodes[p])];
    if (dp >= 0) rhs(dp) += coef * ov->B(static_cast<Eigen::Index>(p), nm - ov->first);
  }
  return rhs;
}

CVec solve_direct(const AssembledSystem &system, SolveInfo *info, SolverBackend backend)
{
  return solve_sparse(system.matrix, system.rhs, info, backend);
}

void write_matrix_market(std::ostream &os, const SpMat &A)
{
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n' << std::setprecision(17);
  for (int c = 0; c < A.outerSize(); ++c)
  {
    for (SpMat::InnerIterator it(A, c); it; ++it)
    {
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value().real() << ' ' << it.value().imag() << '\n';
    }
  }
}

}  // namespace wginv
