// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wginv/error.hpp"
#include "wginv/geometry.hpp"

namespace wginv
{

namespace
{
using nlohmann::json;

json profile_to_json(const Profile &p)
{
  switch (p.kind())
  {
    case Profile::Kind::Zero: return {{"kind", "zero"}};
    case Profile::Kind::Sine:
    case Profile::Kind::Cosine:
      return {{"kind", p.kind() == Profile::Kind::Sine ? "sine" : "cosine"},
              {"amplitude", p.amplitude()},
              {"frequency", p.frequency()},
              {"half_width", p.half_width()},
              {"center", p.center()}};
    case Profile::Kind::Tent:
      return {{"kind", "tent"}, {"amplitude", p.amplitude()}, {"half_width", p.half_width()}, {"center", p.center()}};
    case Profile::Kind::Table: return {{"kind", "table"}, {"x", p.xs()}, {"y", p.ys()}};
    case Profile::Kind::Combination:
    {
      json terms = json::array();
      for (const auto &[c, q] : p.terms())
      {
        terms.push_back({{"coef", c}, {"profile", profile_to_json(q)}});
      }
      return {{"kind", "combination"}, {"terms", terms}};
    }
  }
  return {{"kind", "zero"}};
}

Profile profile_from_json(const json &j)
{
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return Profile::zero();
  if (kind == "sine" || kind == "cosine")
  {
    const double a = j.at("amplitude"), f = j.at("frequency"), w = j.at("half_width");
    const double c = j.value("center", 0.0);
    return kind == "sine" ? Profile::sine(a, f, w, c) : Profile::cosine(a, f, w, c);
  }
  if (kind == "tent") return Profile::tent(j.value("amplitude", 1.0), j.at("half_width"), j.value("center", 0.0));
  if (kind == "table") return Profile::table(j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>());
  if (kind == "combination")
  {
    std::vector<std::pair<double, Profile>> terms;
    for (const json &t : j.at("terms"))
    {
      terms.emplace_back(t.at("coef").get<double>(), profile_from_json(t.at("profile")));
    }
    return Profile::combination(std::move(terms));
  }
  if (kind == "dirichlet_basis") return Profile::dirichlet_basis(j.at("k"), j.at("index"));
  if (kind == "neumann_basis") return Profile::neumann_basis(j.at("k"), j.at("index"));
  if (kind == "neumann_tent") return Profile::neumann_tent(j.at("k"));
  fail(ErrorCode::InvalidArgument, "unknown profile kind '" + kind + "'");
}

json rect_json(const Rect &r) { return json::array({r.x0, r.x1, r.y0, r.y1}); }

Rect rect_from(const json &j)
{
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 4) fail(ErrorCode::InvalidArgument, "rectangles are [x0,x1,y0,y1]");
  return {v[0], v[1], v[2], v[3]};
}

// P2 (or P1) shape functions at barycentric coordinates.
void shape(int order, double l0, double l1, double l2, double *n)
{
  if (order == 1)
  {
    n[0] = l0;
    n[1] = l1;
    n[2] = l2;
    return;
  }
  n[0] = l0 * (2.0 * l0 - 1.0);
  n[1] = l1 * (2.0 * l1 - 1.0);
  n[2] = l2 * (2.0 * l2 - 1.0);
  n[3] = 4.0 * l0 * l1;
  n[4] = 4.0 * l1 * l2;
  n[5] = 4.0 * l2 * l0;
}

bool barycentric(const Mesh &m, std::size_t t, double x, double y, double &l0, double &l1, double &l2)
{
  const Point &a = m.nodes[static_cast<std::size_t>(m.triangles[t][0])];
  const Point &b = m.nodes[static_cast<std::size_t>(m.triangles[t][1])];
  const Point &c = m.nodes[static_cast<std::size_t>(m.triangles[t][2])];
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  l1 = ((x - a.x) * (c.y - a.y) - (c.x - a.x) * (y - a.y)) / det;
  l2 = ((b.x - a.x) * (y - a.y) - (x - a.x) * (b.y - a.y)) / det;
  l0 = 1.0 - l1 - l2;
  const double eps = -1e-12;
  return l0 >= eps && l1 >= eps && l2 >= eps;
}

cplx eval_in(const Mesh &m, const std::vector<cplx> &field, std::size_t t, double l0, double l1, double l2)
{
  double n[6];
  shape(m.order, l0, l1, l2, n);
  cplx v = 0.0;
  for (int i = 0; i < m.nodes_per_triangle(); ++i)
  {
    v += n[i] * field[static_cast<std::size_t>(m.tri_nodes[t][static_cast<std::size_t>(i)])];
  }
  return v;
}
}  // namespace

std::string spec_to_json(const GeometrySpec &spec)
{
  json j;
  j["half_length"] = spec.half_length;
  j["wall_bc"] = to_string(spec.wall_bc);
  j["profile"] = profile_to_json(spec.profile);
  j["amplitude"] = spec.amplitude;
  json obs = json::array();
  for (const Obstacle &o : spec.obstacles)
  {
    if (const Rect *r = std::get_if<Rect>(&o))
      obs.push_back({{"rect", rect_json(*r)}});
    else
    {
      const Disk &d = std::get<Disk>(o);
      obs.push_back({{"disk", {{"cx", d.cx}, {"cy", d.cy}, {"r", d.r}}}});
    }
  }
  j["obstacles"] = obs;
  json reg = json::array();
  for (const IndexRegion &r : spec.index_regions)
  {
    reg.push_back({{"rect", rect_json(r.rect)}, {"gamma", r.gamma}});
  }
  j["index_regions"] = reg;
  json ch = json::array();
  for (const Chimney &c : spec.chimneys)
  {
    ch.push_back({{"x", c.x}, {"width", c.width}, {"height", c.height}});
  }
  j["chimneys"] = ch;
  j["symmetric_half"] = spec.symmetric_half;
  j["x_breaks"] = spec.x_breaks;
  return j.dump(2);
}

GeometrySpec spec_from_json(const std::string &text)
{
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::exception &e)
  {
    fail(ErrorCode::InvalidArgument, std::string("geometry JSON: ") + e.what());
  }
  GeometrySpec s;
  try
  {
    s.half_length = j.value("half_length", 5.0);
    const std::string bc = j.value("wall_bc", std::string("neumann"));
    if (bc == "dirichlet") s.wall_bc = BcKind::Dirichlet;
    else if (bc == "neumann") s.wall_bc = BcKind::Neumann;
    else fail(ErrorCode::InvalidArgument, "wall_bc must be 'dirichlet' or 'neumann'");
    if (j.contains("profile")) s.profile = profile_from_json(j["profile"]);
    s.amplitude = j.value("amplitude", 0.0);
    for (const json &o : j.value("obstacles", json::array()))
    {
      if (o.contains("rect")) s.obstacles.emplace_back(rect_from(o["rect"]));
      else if (o.contains("disk"))
      {
        const json &d = o["disk"];
        s.obstacles.emplace_back(Disk{d.at("cx"), d.at("cy"), d.at("r")});
      }
      else fail(ErrorCode::InvalidArgument, "obstacle must be {rect:[...]} or {disk:{...}}");
    }
    for (const json &r : j.value("index_regions", json::array()))
    {
      s.index_regions.push_back({rect_from(r.at("rect")), r.at("gamma").get<double>()});
    }
    for (const json &c : j.value("chimneys", json::array()))
    {
      s.chimneys.push_back({c.at("x"), c.at("width"), c.at("height")});
    }
    s.symmetric_half = j.value("symmetric_half", false);
    s.x_breaks = j.value("x_breaks", std::vector<double>{});
  }
  catch (const json::exception &e)
  {
    fail(ErrorCode::InvalidArgument, std::string("geometry JSON: ") + e.what());
  }
  validate(s);
  return s;
}

GeometrySpec load_spec(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    fail(ErrorCode::IoFailure, "cannot open geometry file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_json(ss.str());
}

void write_vtk(std::ostream &os, const Mesh &mesh, const std::vector<cplx> *field, const std::string &name)
{
  os << std::setprecision(15);
  os << "# vtk DataFile Version 3.0\nwginv mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.nodes.size() << " double\n";
  for (const Point &p : mesh.nodes)
  {
    os << p.x << ' ' << p.y << " 0\n";
  }
  const int npt = mesh.nodes_per_triangle();
  os << "CELLS " << mesh.triangles.size() << ' ' << mesh.triangles.size() * static_cast<std::size_t>(npt + 1) << '\n';
  for (const auto &t : mesh.tri_nodes)
  {
    os << npt;
    for (int i = 0; i < npt; ++i) os << ' ' << t[static_cast<std::size_t>(i)];
    os << '\n';
  }
  os << "CELL_TYPES " << mesh.triangles.size() << '\n';
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i)
  {
    os << (mesh.order == 2 ? 22 : 5) << '\n';
  }
  os << "CELL_DATA " << mesh.triangles.size() << "\nSCALARS gamma double 1\nLOOKUP_TABLE default\n";
  for (double g : mesh.gamma) os << g << '\n';
  if (field)
  {
    os << "POINT_DATA " << mesh.nodes.size() << '\n';
    os << "SCALARS Re_" << name << " double 1\nLOOKUP_TABLE default\n";
    for (const cplx &v : *field) os << v.real() << '\n';
    os << "SCALARS Im_" << name << " double 1\nLOOKUP_TABLE default\n";
    for (const cplx &v : *field) os << v.imag() << '\n';
  }
}

void write_vtk_sampled(std::ostream &os, const Mesh &mesh, const std::vector<cplx> &field, double x0, double x1,
                       int nx, int ny, const std::string &name)
{
  double ymax = 0.0;
  for (const Point &p : mesh.nodes) ymax = std::max(ymax, p.y);
  const double dx = nx > 1 ? (x1 - x0) / (nx - 1) : 1.0, dy = ny > 1 ? ymax / (ny - 1) : 1.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<cplx> grid(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), cplx(nan, nan));
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    double bx0 = 1e300, bx1 = -1e300, by0 = 1e300, by1 = -1e300;
    for (int c = 0; c < 3; ++c)
    {
      const Point &p = mesh.nodes[static_cast<std::size_t>(mesh.triangles[t][static_cast<std::size_t>(c)])];
      bx0 = std::min(bx0, p.x); bx1 = std::max(bx1, p.x);
      by0 = std::min(by0, p.y); by1 = std::max(by1, p.y);
    }
    const int i0 = std::max(0, static_cast<int>(std::ceil((bx0 - x0) / dx - 1e-9)));
    const int i1 = std::min(nx - 1, static_cast<int>(std::floor((bx1 - x0) / dx + 1e-9)));
    const int j0 = std::max(0, static_cast<int>(std::ceil(by0 / dy - 1e-9)));
    const int j1 = std::min(ny - 1, static_cast<int>(std::floor(by1 / dy + 1e-9)));
    for (int i = i0; i <= i1; ++i)
    {
      for (int j = j0; j <= j1; ++j)
      {
        double l0, l1, l2;
        if (barycentric(mesh, t, x0 + i * dx, j * dy, l0, l1, l2))
        {
          grid[static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i)] =
              eval_in(mesh, field, t, l0, l1, l2);
        }
      }
    }
  }
  os << std::setprecision(15);
  os << "# vtk DataFile Version 3.0\nwginv sampled field\nASCII\nDATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << nx << ' ' << ny << " 1\nORIGIN " << x0 << " 0 0\nSPACING " << dx << ' ' << dy << " 1\n";
  os << "POINT_DATA " << grid.size() << '\n';
  os << "SCALARS Re_" << name << " double 1\nLOOKUP_TABLE default\n";
  for (const cplx &v : grid) os << v.real() << '\n';
  os << "SCALARS Im_" << name << " double 1\nLOOKUP_TABLE default\n";
  for (const cplx &v : grid) os << v.imag() << '\n';
}

bool evaluate_field(const Mesh &mesh, const std::vector<cplx> &field, double x, double y, cplx &value)
{
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    double l0, l1, l2;
    if (barycentric(mesh, t, x, y, l0, l1, l2))
    {
      value = eval_in(mesh, field, t, l0, l1, l2);
      return true;
    }
  }
  return false;
}

}  // namespace wginv
