// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "wginv/fem.hpp"
#include "wginv/quadrature.hpp"

using namespace wginv;
constexpr double pi = std::numbers::pi;

namespace
{

Mesh strip_mesh(double L, double h, int order = 2, BcKind bc = BcKind::Neumann)
{
  GeometrySpec g;
  g.half_length = L;
  g.wall_bc = bc;
  return build_mesh(g, h, order);
}

// Sum over elements of u^T A_e u for a nodal interpolant u.
template <class Pick>
double quadratic_form(const Mesh &m, const std::vector<double> &u, Pick pick)
{
  double s = 0.0;
  const int np = m.nodes_per_triangle();
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
  {
    const ElementMatrices e = element_matrices(m, t);
    const auto &A = pick(e);
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j) s += u[m.tri_nodes[t][i]] * A(i, j) * u[m.tri_nodes[t][j]];
  }
  return s;
}

}  // namespace

TEST(Fem, ElementMatrixStructure)
{
  GeometrySpec g;
  g.half_length = 1.0;
  g.obstacles.push_back(Disk{0.3, 0.5, 0.25});
  for (int order : {1, 2})
  {
    const Mesh m = build_mesh(g, 0.1, order);
    const int np = m.nodes_per_triangle();
    for (std::size_t t = 0; t < m.triangles.size(); t += 7)
    {
      const ElementMatrices e = element_matrices(m, t);
      double gl[3][2];
      const double area = tri_geometry(m, t, gl);
      EXPECT_GT(area, 0.0);
      double msum = 0.0;
      for (int i = 0; i < np; ++i)
      {
        double rx = 0.0, ry = 0.0;
        for (int j = 0; j < np; ++j)
        {
          EXPECT_NEAR(e.sxx(i, j), e.sxx(j, i), 1e-13);
          EXPECT_NEAR(e.mass(i, j), e.mass(j, i), 1e-15);
          rx += e.sxx(i, j);
          ry += e.syy(i, j);
          msum += e.mass(i, j);
        }
        // Constants lie in the kernel of the stiffness matrices.
        EXPECT_NEAR(rx, 0.0, 1e-11);
        EXPECT_NEAR(ry, 0.0, 1e-11);
      }
      EXPECT_NEAR(msum, area, 1e-14);
    }
  }
}

TEST(Fem, ShapeFunctionsPartitionUnity)
{
  const double gl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int order : {1, 2})
  {
    for (int s = 0; s < 50; ++s)
    {
      double a = u(rng), b = u(rng);
      if (a + b > 1.0)
      {
        a = 1.0 - a;
        b = 1.0 - b;
      }
      const double l[3] = {1.0 - a - b, a, b};
      double n[6], g[6][2];
      shape_and_grad(order, l, gl, n, g);
      double sn = 0.0, gx = 0.0, gy = 0.0;
      for (int i = 0; i < (order == 2 ? 6 : 3); ++i)
      {
        sn += n[i];
        gx += g[i][0];
        gy += g[i][1];
      }
      EXPECT_NEAR(sn, 1.0, 1e-14);
      EXPECT_NEAR(gx, 0.0, 1e-13);
      EXPECT_NEAR(gy, 0.0, 1e-13);
    }
  }
}

// P2 interpolation of quadratics is exact, so element integrals reproduce closed forms.
TEST(Fem, QuadraticExactness)
{
  const double L = 1.5;
  const Mesh m = strip_mesh(L, 0.1);
  std::vector<double> ux(m.nodes.size()), uy(m.nodes.size());
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
  {
    ux[i] = m.nodes[i].x * m.nodes[i].x;
    uy[i] = m.nodes[i].x * m.nodes[i].y;
  }
  // int (2x)^2 = 8 L^3 / 3; int x^4 = 2 L^5 / 5; int x^2 (dy) = 2 L^3 / 3.
  EXPECT_NEAR(quadratic_form(m, ux, [](const ElementMatrices &e) -> const auto & { return e.sxx; }),
              8.0 * L * L * L / 3.0, 1e-10);
  EXPECT_NEAR(quadratic_form(m, ux, [](const ElementMatrices &e) -> const auto & { return e.mass; }),
              2.0 * std::pow(L, 5) / 5.0, 1e-10);
  EXPECT_NEAR(quadratic_form(m, uy, [](const ElementMatrices &e) -> const auto & { return e.syy; }),
              2.0 * L * L * L / 3.0, 1e-10);
}

TEST(Fem, SectionOverlaps)
{
  const Mesh m = strip_mesh(1.0, 0.1);
  for (BcKind bc : {BcKind::Neumann, BcKind::Dirichlet})
  {
    const SigmaOverlaps s = sigma_overlaps(m, Side::Left, bc, 6);
    EXPECT_EQ(s.x, -1.0);
    std::vector<cplx> one(m.nodes.size(), 1.0), lin(m.nodes.size());
    for (std::size_t i = 0; i < m.nodes.size(); ++i) lin[i] = m.nodes[i].y;
    for (int n = first_index(bc); n <= 6; ++n)
    {
      // Closed forms of int phi_n and int y phi_n over (0, 1).
      double i0, i1;
      if (bc == BcKind::Neumann)
      {
        i0 = n == 0 ? 1.0 : 0.0;
        i1 = n == 0 ? 0.5 : std::sqrt(2.0) * ((n % 2 == 0 ? 1.0 : -1.0) - 1.0) / (n * n * pi * pi);
      }
      else
      {
        i0 = std::sqrt(2.0) * (1.0 - (n % 2 == 0 ? 1.0 : -1.0)) / (n * pi);
        i1 = std::sqrt(2.0) * -((n % 2 == 0 ? 1.0 : -1.0)) / (n * pi);
      }
      if (bc == BcKind::Neumann) EXPECT_NEAR(std::abs(s.project(one, n) - i0), 0.0, 1e-12) << n;
      EXPECT_NEAR(std::abs(s.project(lin, n) - i1), 0.0, 1e-12) << n;
    }
  }
}

TEST(Fem, MomentExpAgainstQuadrature)
{
  const GaussRule g = gauss_legendre(60);
  for (double a : {0.0, 1e-8, 0.3, 1.99, 2.01, 7.5, -4.0, 40.0})
  {
    const auto mo = moment_exp(a);
    for (int j = 0; j < 3; ++j)
    {
      cplx ref = 0.0;
      for (std::size_t q = 0; q < g.nodes.size(); ++q)
      {
        const double t = 0.5 * (g.nodes[q] + 1.0);
        ref += 0.5 * g.weights[q] * std::pow(t, j) * std::exp(cplx(0.0, a * t));
      }
      EXPECT_NEAR(std::abs(mo[j] - ref), 0.0, 1e-13) << a << ' ' << j;
    }
  }
}

TEST(Fem, ScalingCoefficients)
{
  const ScalingCoefficients cl{pi / 4.0, 1.0, false}, cj{pi / 4.0, 1.0, true};
  const cplx down = std::exp(cplx(0.0, -pi / 4.0));
  EXPECT_EQ(cl.at(0.5), cplx(1.0));
  EXPECT_EQ(cl.at(-2.0), down);
  EXPECT_EQ(cl.at(2.0), down);
  EXPECT_EQ(cj.at(-2.0), std::conj(down));
  EXPECT_EQ(cj.at(2.0), down);
}

TEST(Fem, ScaledOperatorsAreComplexSymmetric)
{
  const Mesh m = strip_mesh(3.0, 0.1);
  for (bool conj : {false, true})
  {
    const ScaledOperators op = assemble_scaled(m, ScalingCoefficients{pi / 4.0, 1.0, conj}, BcKind::Neumann);
    const SpMat kt = op.K.transpose(), mt = op.M.transpose();
    EXPECT_LT((op.K - kt).norm(), 1e-12 * op.K.norm());
    EXPECT_LT((op.M - mt).norm(), 1e-12 * op.M.norm());
    // Scaled blocks make K non-Hermitian.
    const SpMat kh = op.K.adjoint();
    EXPECT_GT((op.K - kh).norm(), 1e-3 * op.K.norm());
  }
  // theta = 0 reduces to the real stiffness matrix.
  const ScaledOperators op0 = assemble_scaled(m, ScalingCoefficients{0.0, 1.0, true}, BcKind::Neumann);
  double im = 0.0;
  for (int c = 0; c < op0.K.outerSize(); ++c)
    for (SpMat::InnerIterator it(op0.K, c); it; ++it) im = std::max(im, std::abs(it.value().imag()));
  EXPECT_EQ(im, 0.0);
}

namespace
{

double plane_wave_error(double h, SolverBackend backend = SolverBackend::SparseLu)
{
  const double k = 0.8 * pi;
  const Mesh m = strip_mesh(2.0, h);
  DtnPair dtn;
  dtn.left = DtnTruncation{8, Side::Left, BcKind::Neumann, k, 0.0};
  dtn.right = DtnTruncation{8, Side::Right, BcKind::Neumann, k, 0.0};
  const AssembledSystem sys = assemble_helmholtz(m, k, 0.0, dtn, IncidentWave{0, Side::Left});
  SolveInfo info;
  const std::vector<cplx> u = sys.to_nodes(solve_direct(sys, &info, backend));
  EXPECT_LT(info.relative_residual, 1e-12);
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - std::exp(cplx(0.0, k * m.nodes[i].x))));
  return err;
}

}  // namespace

// Nodal P2 error for a plane wave decays at least like h^3.
TEST(Fem, EmptyStripReproducesPlaneWave)
{
  const double e1 = plane_wave_error(0.1), e2 = plane_wave_error(0.05);
  EXPECT_LT(e1, 2e-4);
  EXPECT_GT(e1 / e2, 7.0);
  EXPECT_NEAR(plane_wave_error(0.1, SolverBackend::Banded), e1, 1e-12);
}

TEST(Fem, DirichletWallsConstrainNodes)
{
  const double k = 1.5 * pi;
  const Mesh m = strip_mesh(1.0, 0.05, 2, BcKind::Dirichlet);
  DtnPair dtn;
  dtn.left = DtnTruncation{6, Side::Left, BcKind::Dirichlet, k, 0.0};
  dtn.right = DtnTruncation{6, Side::Right, BcKind::Dirichlet, k, 0.0};
  AssemblyOptions opt;
  opt.wall_bc = BcKind::Dirichlet;
  const AssembledSystem sys = assemble_helmholtz(m, k, 0.0, dtn, IncidentWave{1, Side::Left}, opt);
  int constrained = 0;
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
  {
    const bool on_wall = m.nodes[i].y == 0.0 || m.nodes[i].y == 1.0;
    EXPECT_EQ(sys.dof_map.node_to_dof[i] < 0, on_wall);
    constrained += on_wall;
  }
  EXPECT_EQ(sys.dof_map.size() + constrained, static_cast<int>(m.nodes.size()));
  const std::vector<cplx> u = sys.to_nodes(solve_direct(sys));
  double err = 0.0;
  const double b1 = std::sqrt(k * k - pi * pi);
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    const cplx ex = std::exp(cplx(0.0, b1 * m.nodes[i].x)) * std::sqrt(2.0) * std::sin(pi * m.nodes[i].y);
    err = std::max(err, std::abs(u[i] - ex));
  }
  EXPECT_LT(err, 1e-3);
}

TEST(Fem, MatrixMarketHeader)
{
  SpMat A(2, 2);
  A.insert(0, 0) = cplx(1.0, 2.0);
  A.insert(1, 0) = 3.0;
  std::ostringstream os;
  write_matrix_market(os, A);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "%%MatrixMarket matrix coordinate complex general");
  EXPECT_NE(os.str().find("2 2 2"), std::string::npos);
}
