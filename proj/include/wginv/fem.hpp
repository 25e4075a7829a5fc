// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_FEM_HPP
#define WGINV_FEM_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wginv/geometry.hpp"
#include "wginv/modes.hpp"

namespace wginv
{

using SpMat = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;
using CVec = Eigen::VectorXcd;

enum class Side
{
  Left,
  Right
};

struct DtnTruncation
{
  int M = 10;  // highest retained transverse index
  Side side = Side::Left;
  BcKind bc = BcKind::Neumann;
  double k = 1.0;
  double eta = 0.0;
};

struct DtnPair
{
  std::optional<DtnTruncation> left, right;
};

struct IncidentWave
{
  int mode = 0;
  Side side = Side::Left;
};

// Unconstrained node <-> unknown numbering.
struct DofMap
{
  std::vector<int> node_to_dof;  // -1 for constrained nodes
  std::vector<int> dof_to_node;
  int size() const { return static_cast<int>(dof_to_node.size()); }
};

// Exact overlaps b_n(node) = integral over the section of (shape function) * phi_n.
struct SigmaOverlaps
{
  BcKind bc = BcKind::Neumann;
  int first = 0;
  int M = 0;
  std::vector<int> nodes;  // section nodes, increasing y
  Eigen::MatrixXd B;       // rows: section nodes, cols: n - first
  double x = 0.0;

  // (u, phi_n) on the section for a nodal field.
  cplx project(const std::vector<cplx> &field, int n) const;
};

SigmaOverlaps sigma_overlaps(const Mesh &mesh, Side side, BcKind bc, int M);

struct AssemblyOptions
{
  BcKind wall_bc = BcKind::Neumann;
  BcKind symmetry_bc = BcKind::Neumann;  // condition on SymmetryPlane edges
  std::function<cplx(double, double)> source;  // optional volume source f
};

struct AssembledSystem
{
  SpMat matrix;
  CVec rhs;
  DofMap dof_map;
  std::vector<char> dirichlet_mask;  // per node
  std::optional<SigmaOverlaps> left, right;

  std::vector<cplx> to_nodes(const CVec &x) const;
};

// Integral of grad u . grad v - (k^2 + i k eta) gamma u v minus the DtN terms, with
// right-hand side -2 i beta_n integral of w_n^inc v on the inflow section.
AssembledSystem assemble_helmholtz(const Mesh &mesh, double k, double eta, const DtnPair &dtn,
                                   const std::optional<IncidentWave> &incident,
                                   const AssemblyOptions &options = {});

// Incident trace term -2 i beta_n integral of w_n^inc v on the inflow section.
CVec incident_rhs(const AssembledSystem &system, const Mesh &mesh, const DtnTruncation &dtn,
                  const IncidentWave &incident);

struct ScalingCoefficients
{
  double theta = 0.0;
  double L = 1.0;
  bool conjugated = false;

  // 1 for |x| < L; exp(-i theta) on both sides (classical) or
  // exp(+i theta) left / exp(-i theta) right (conjugated).
  cplx at(double x) const;
};

struct ScaledOperators
{
  SpMat K;
  SpMat M;
  DofMap dof_map;
};

// K = c dx u dx v + c^-1 dy u dy v, M = gamma c^-1 u v, homogeneous Dirichlet at both ends.
ScaledOperators assemble_scaled(const Mesh &mesh, const ScalingCoefficients &scaling, BcKind wall_bc);

enum class SolverBackend
{
  SparseLu,  // multifrontal sparse LU
  Banded     // banded LU with partial pivoting inside the band
};

struct SolveInfo
{
  double rcond = 0.0;            // pivot ratio min|u_ii| / max|u_ii|
  double relative_residual = 0.0;
  bool near_singular = false;    // rcond below kNearSingularRcond
};

constexpr double kSingularPivot = 1e-14;
constexpr double kNearSingularRcond = 1e-9;

CVec solve_direct(const AssembledSystem &system, SolveInfo *info = nullptr,
                  SolverBackend backend = SolverBackend::SparseLu);

CVec solve_sparse(const SpMat &A, const CVec &b, SolveInfo *info = nullptr,
                  SolverBackend backend = SolverBackend::SparseLu);

void write_matrix_market(std::ostream &os, const SpMat &A);

// Element matrices of a straight P1/P2 triangle: integrals of dx Ni dx Nj, dy Ni dy Nj, Ni Nj.
struct ElementMatrices
{
  Eigen::Matrix<double, 6, 6> sxx, syy, mass;
};
ElementMatrices element_matrices(const Mesh &mesh, std::size_t tri);

// Shape values n[i] and gradients g[i] at barycentric point l, given the constant
// barycentric gradients gl of the triangle. Node order v0 v1 v2 m01 m12 m20.
void shape_and_grad(int order, const double l[3], const double gl[3][2], double n[6], double g[6][2]);

// Barycentric gradients of triangle t; returns its signed area.
double tri_geometry(const Mesh &mesh, std::size_t t, double gl[3][2]);

// Integral over [0, 1] of t^j * exp(i a t), j = 0, 1, 2, robust for small |a|.
std::array<cplx, 3> moment_exp(double a);

}  // namespace wginv

#endif  // WGINV_FEM_HPP
