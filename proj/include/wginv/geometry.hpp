// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_GEOMETRY_HPP
#define WGINV_GEOMETRY_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wginv/modes.hpp"
#include "wginv/profile.hpp"

namespace wginv
{

struct Rect
{
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  bool operator==(const Rect &) const = default;
};

struct Disk
{
  double cx = 0.0, cy = 0.0, r = 0.0;
  bool operator==(const Disk &) const = default;
};

// Hard inclusion; the wall boundary condition applies on its boundary.
using Obstacle = std::variant<Rect, Disk>;

struct IndexRegion
{
  Rect rect;
  double gamma = 1.0;
  bool operator==(const IndexRegion &) const = default;
};

// Thin rectangle [x - width/2, x + width/2] x [1, 1 + height] on the top wall.
struct Chimney
{
  double x = 0.0;
  double width = 0.0;
  double height = 0.0;
  bool operator==(const Chimney &) const = default;
};

struct GeometrySpec
{
  double half_length = 5.0;  // artificial sections at x = -L and x = +L
  BcKind wall_bc = BcKind::Neumann;
  Profile profile;
  double amplitude = 0.0;  // top wall y = 1 + amplitude * profile(x)
  std::vector<Obstacle> obstacles;
  std::vector<IndexRegion> index_regions;
  std::vector<Chimney> chimneys;
  // When set the spec describes the half guide x in (-L, 0); x = 0 is a symmetry plane.
  bool symmetric_half = false;
  // Extra abscissae the mesh columns must contain (e.g. complex-scaling interfaces).
  std::vector<double> x_breaks;

  double top(double x) const { return 1.0 + amplitude * profile(x); }
  double gamma_at(double x, double y) const;
};

// Throws GeometryInvalid when the spec violates its invariants.
void validate(const GeometrySpec &spec);

bool mirror_check(const GeometrySpec &spec);

// Restriction to x < 0 with a symmetry plane at x = 0. Throws NotSymmetric.
GeometrySpec half_guide(const GeometrySpec &spec);

// Closed x-interval containing every perturbation; lo > hi when the guide is straight.
std::pair<double, double> perturbation_extent(const GeometrySpec &spec);

// Analytic area of the bounded domain (disks counted exactly).
double analytic_area(const GeometrySpec &spec);

enum class BoundaryTag
{
  WallGamma,
  SigmaMinusL,
  SigmaPlusL,
  SymmetryPlane
};

const char *to_string(BoundaryTag tag);

struct Point
{
  double x = 0.0, y = 0.0;
};

struct BoundaryEdge
{
  int a = -1, b = -1;  // end nodes; Sigma edges have y(a) < y(b)
  int mid = -1;        // midpoint node for q = 2
  BoundaryTag tag = BoundaryTag::WallGamma;
};

struct Mesh
{
  int order = 2;
  std::vector<Point> nodes;                 // vertices and (q = 2) edge midpoints
  std::vector<char> is_vertex;
  std::vector<std::array<int, 3>> triangles;  // vertex nodes, counter-clockwise
  std::vector<std::array<int, 6>> tri_nodes;  // v0 v1 v2 m01 m12 m20 (q = 2)
  std::vector<double> gamma;                // one value per triangle
  std::vector<BoundaryEdge> boundary;
  std::vector<int> sigma_minus;  // indices into boundary, increasing y
  std::vector<int> sigma_plus;
  double x_min = 0.0, x_max = 0.0;

  int nodes_per_triangle() const { return order == 2 ? 6 : 3; }
  std::size_t vertex_count() const;
  double area() const;
  double min_angle_deg() const;
  // Node index of the mirror image (x -> -x), or -1 when absent.
  std::vector<int> mirror_map(double tol = 1e-12) const;
};

// Structured mapped mesh of the spec with element size about target_h.
Mesh build_mesh(const GeometrySpec &spec, double target_h, int order = 2);

// JSON (de)serialization of GeometrySpec.
std::string spec_to_json(const GeometrySpec &spec);
GeometrySpec spec_from_json(const std::string &text);
GeometrySpec load_spec(const std::string &path);

// Legacy ASCII VTK unstructured grid; optional complex nodal field as two scalars.
void write_vtk(std::ostream &os, const Mesh &mesh, const std::vector<cplx> *field = nullptr,
               const std::string &name = "u");

// Field sampled on a uniform grid (STRUCTURED_POINTS); points outside the mesh get NaN.
void write_vtk_sampled(std::ostream &os, const Mesh &mesh, const std::vector<cplx> &field,
                       double x0, double x1, int nx, int ny, const std::string &name = "u");

// Evaluates the finite element field at (x, y); returns false when outside the mesh.
bool evaluate_field(const Mesh &mesh, const std::vector<cplx> &field, double x, double y, cplx &value);

}  // namespace wginv

#endif  // WGINV_GEOMETRY_HPP
