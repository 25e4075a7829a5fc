// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "wginv/error.hpp"
#include "wginv/quadrature.hpp"

namespace wginv
{

namespace
{
constexpr double pi = std::numbers::pi;

bool open_overlap(double a0, double a1, double b0, double b1) { return a0 < b1 && b0 < a1; }

Rect bounding_box(const Obstacle &o)
{
  if (const Rect *r = std::get_if<Rect>(&o))
  {
    return *r;
  }
  const Disk &d = std::get<Disk>(o);
  return {d.cx - d.r, d.cx + d.r, d.cy - d.r, d.cy + d.r};
}

Obstacle mirrored(const Obstacle &o)
{
  if (const Rect *r = std::get_if<Rect>(&o))
  {
    return Rect{-r->x1, -r->x0, r->y0, r->y1};
  }
  const Disk &d = std::get<Disk>(o);
  return Disk{-d.cx, d.cy, d.r};
}

template <class T, class F>
bool closed_under(const std::vector<T> &items, F mirror)
{
  for (const T &it : items)
  {
    const T m = mirror(it);
    if (std::find(items.begin(), items.end(), m) == items.end())
    {
      return false;
    }
  }
  return true;
}
}  // namespace

double GeometrySpec::gamma_at(double x, double y) const
{
  double g = 1.0;
  for (const IndexRegion &r : index_regions)
  {
    if (x >= r.rect.x0 && x <= r.rect.x1 && y >= r.rect.y0 && y <= r.rect.y1)
    {
      g = r.gamma;
    }
  }
  return g;
}

void validate(const GeometrySpec &spec)
{
  const double L = spec.half_length;
  if (!(L > 0.0) || !std::isfinite(L))
  {
    fail(ErrorCode::GeometryInvalid, "half_length must be positive");
  }
  const double hi = spec.symmetric_half ? 0.0 : L;
  auto inside_x = [&](double a, double b, const char *what) {
    const bool ok = spec.symmetric_half ? (a > -L && b <= hi) : (a > -L && b < hi);
    if (!ok)
    {
      fail(ErrorCode::GeometryInvalid, std::string(what) + " must lie in |x| < L");
    }
  };

  if (!std::isfinite(spec.amplitude))
  {
    fail(ErrorCode::GeometryInvalid, "profile amplitude must be finite");
  }
  const bool has_profile = spec.amplitude != 0.0 && !spec.profile.is_zero();
  double plo = 1.0, phi_ = -1.0;
  if (has_profile)
  {
    std::tie(plo, phi_) = spec.profile.support();
    if (spec.symmetric_half)
    {
      if (!(plo > -L)) fail(ErrorCode::GeometryInvalid, "profile support must lie in |x| < L");
    }
    else
    {
      inside_x(plo, phi_, "profile support");
    }
    std::vector<double> xs = spec.profile.breakpoints();
    for (int i = 0; i <= 4000; ++i)
    {
      xs.push_back(plo + (phi_ - plo) * i / 4000.0);
    }
    for (double x : xs)
    {
      if (!(spec.top(x) > 0.0))
      {
        fail(ErrorCode::GeometryInvalid, "top wall 1 + eps*mu(x) must stay positive");
      }
    }
  }
  auto clashes_profile = [&](double a, double b) { return has_profile && open_overlap(a, b, plo, phi_); };

  for (std::size_t i = 0; i < spec.obstacles.size(); ++i)
  {
    const Rect bb = bounding_box(spec.obstacles[i]);
    if (const Disk *d = std::get_if<Disk>(&spec.obstacles[i]))
    {
      if (!(d->r > 0.0)) fail(ErrorCode::GeometryInvalid, "disk radius must be positive");
      if (spec.symmetric_half && d->cx + d->r > 0.0)
      {
        fail(ErrorCode::GeometryInvalid, "disk crosses the symmetry plane");
      }
    }
    else if (!(bb.x1 > bb.x0 && bb.y1 > bb.y0))
    {
      fail(ErrorCode::GeometryInvalid, "obstacle rectangle is degenerate");
    }
    if (!(bb.y0 > 0.0 && bb.y1 < 1.0))
    {
      fail(ErrorCode::GeometryInvalid, "obstacles must not touch the walls");
    }
    inside_x(bb.x0, bb.x1, "obstacle");
    if (clashes_profile(bb.x0, bb.x1))
    {
      fail(ErrorCode::GeometryInvalid, "obstacle overlaps the deformed wall region");
    }
    for (std::size_t j = 0; j < i; ++j)
    {
      const Rect other = bounding_box(spec.obstacles[j]);
      bool hit = open_overlap(bb.x0, bb.x1, other.x0, other.x1) &&
                 open_overlap(bb.y0, bb.y1, other.y0, other.y1);
      const Disk *d1 = std::get_if<Disk>(&spec.obstacles[i]);
      const Disk *d2 = std::get_if<Disk>(&spec.obstacles[j]);
      if (d1 && d2)
      {
        hit = std::hypot(d1->cx - d2->cx, d1->cy - d2->cy) <= d1->r + d2->r;
      }
      if (hit)
      {
        fail(ErrorCode::GeometryInvalid, "obstacles intersect");
      }
    }
  }

  for (std::size_t i = 0; i < spec.index_regions.size(); ++i)
  {
    const IndexRegion &r = spec.index_regions[i];
    if (!(r.gamma > 0.0) || !std::isfinite(r.gamma))
    {
      fail(ErrorCode::GeometryInvalid, "index gamma must be positive");
    }
    if (!(r.rect.x1 > r.rect.x0 && r.rect.y1 > r.rect.y0 && r.rect.y0 >= 0.0 && r.rect.y1 <= 1.0))
    {
      fail(ErrorCode::GeometryInvalid, "index region must be a rectangle inside the strip");
    }
    inside_x(r.rect.x0, r.rect.x1, "index region");
    if (clashes_profile(r.rect.x0, r.rect.x1))
    {
      fail(ErrorCode::GeometryInvalid, "index region overlaps the deformed wall region");
    }
    for (std::size_t j = 0; j < i; ++j)
    {
      const IndexRegion &o = spec.index_regions[j];
      if (o.gamma != r.gamma && open_overlap(r.rect.x0, r.rect.x1, o.rect.x0, o.rect.x1) &&
          open_overlap(r.rect.y0, r.rect.y1, o.rect.y0, o.rect.y1))
      {
        fail(ErrorCode::GeometryInvalid, "overlapping index regions with different gamma");
      }
    }
  }

  for (std::size_t i = 0; i < spec.chimneys.size(); ++i)
  {
    const Chimney &c = spec.chimneys[i];
    if (!(c.width > 0.0 && c.height > 0.0))
    {
      fail(ErrorCode::GeometryInvalid, "chimney width and height must be positive");
    }
    const double a = c.x - 0.5 * c.width, b = c.x + 0.5 * c.width;
    inside_x(a, b, "chimney");
    if (clashes_profile(a, b))
    {
      fail(ErrorCode::GeometryInvalid, "chimney overlaps the deformed wall region");
    }
    for (std::size_t j = 0; j < i; ++j)
    {
      const Chimney &o = spec.chimneys[j];
      if (open_overlap(a, b, o.x - 0.5 * o.width, o.x + 0.5 * o.width) || a == o.x + 0.5 * o.width ||
          b == o.x - 0.5 * o.width)
      {
        fail(ErrorCode::GeometryInvalid, "chimneys overlap");
      }
    }
  }
  for (double x : spec.x_breaks)
  {
    if (!(x > -L && x < L))
    {
      fail(ErrorCode::GeometryInvalid, "mesh break outside the domain");
    }
  }
}

bool mirror_check(const GeometrySpec &spec)
{
  if (spec.symmetric_half)
  {
    return false;
  }
  if (spec.amplitude != 0.0 && !spec.profile.is_even())
  {
    return false;
  }
  if (!closed_under(spec.obstacles, mirrored))
  {
    return false;
  }
  if (!closed_under(spec.index_regions, [](const IndexRegion &r) {
        return IndexRegion{Rect{-r.rect.x1, -r.rect.x0, r.rect.y0, r.rect.y1}, r.gamma};
      }))
  {
    return false;
  }
  return closed_under(spec.chimneys, [](const Chimney &c) { return Chimney{-c.x, c.width, c.height}; });
}

GeometrySpec half_guide(const GeometrySpec &spec)
{
  if (!mirror_check(spec))
  {
    fail(ErrorCode::NotSymmetric, "geometry is not mirror-symmetric about x = 0");
  }
  GeometrySpec h = spec;
  h.symmetric_half = true;
  h.obstacles.clear();
  for (const Obstacle &o : spec.obstacles)
  {
    if (const Rect *r = std::get_if<Rect>(&o))
    {
      if (r->x0 < 0.0)
      {
        h.obstacles.push_back(Rect{r->x0, std::min(r->x1, 0.0), r->y0, r->y1});
      }
    }
    else
    {
      const Disk &d = std::get<Disk>(o);
      if (d.cx - d.r < 0.0 && d.cx + d.r > 0.0)
      {
        fail(ErrorCode::GeometryInvalid, "disk centred on the symmetry plane is not supported");
      }
      if (d.cx < 0.0)
      {
        h.obstacles.push_back(d);
      }
    }
  }
  h.index_regions.clear();
  for (const IndexRegion &r : spec.index_regions)
  {
    if (r.rect.x0 < 0.0)
    {
      IndexRegion c = r;
      c.rect.x1 = std::min(c.rect.x1, 0.0);
      h.index_regions.push_back(c);
    }
  }
  h.chimneys.clear();
  for (const Chimney &c : spec.chimneys)
  {
    const double a = c.x - 0.5 * c.width, b = c.x + 0.5 * c.width;
    if (a < 0.0)
    {
      const double bb = std::min(b, 0.0);
      h.chimneys.push_back(Chimney{0.5 * (a + bb), bb - a, c.height});
    }
  }
  h.x_breaks.clear();
  for (double x : spec.x_breaks)
  {
    if (x < 0.0) h.x_breaks.push_back(x);
  }
  return h;
}

std::pair<double, double> perturbation_extent(const GeometrySpec &spec)
{
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto grow = [&](double a, double b) {
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  };
  if (spec.amplitude != 0.0 && !spec.profile.is_zero())
  {
    const auto [a, b] = spec.profile.support();
    grow(a, b);
  }
  for (const Obstacle &o : spec.obstacles)
  {
    const Rect bb = bounding_box(o);
    grow(bb.x0, bb.x1);
  }
  for (const IndexRegion &r : spec.index_regions)
  {
    if (r.gamma != 1.0) grow(r.rect.x0, r.rect.x1);
  }
  for (const Chimney &c : spec.chimneys) grow(c.x - 0.5 * c.width, c.x + 0.5 * c.width);
  return {lo, hi};
}

double analytic_area(const GeometrySpec &spec)
{
  const double L = spec.half_length;
  const double x0 = -L, x1 = spec.symmetric_half ? 0.0 : L;
  double area = x1 - x0;
  if (spec.amplitude != 0.0 && !spec.profile.is_zero())
  {
    auto [lo, hi] = spec.profile.support();
    lo = std::max(lo, x0);
    hi = std::min(hi, x1);
    if (hi > lo)
    {
      const auto f = [&](double x) { return std::complex<double>(spec.profile(x), 0.0); };
      area += spec.amplitude * integrate_adaptive(f, lo, hi, 1e-14, spec.profile.breakpoints()).real();
    }
  }
  for (const Chimney &c : spec.chimneys)
  {
    area += c.width * c.height;
  }
  for (const Obstacle &o : spec.obstacles)
  {
    if (const Rect *r = std::get_if<Rect>(&o))
    {
      area -= (r->x1 - r->x0) * (r->y1 - r->y0);
    }
    else
    {
      const Disk &d = std::get<Disk>(o);
      area -= pi * d.r * d.r;
    }
  }
  return area;
}

const char *to_string(BoundaryTag tag)
{
  switch (tag)
  {
    case BoundaryTag::WallGamma: return "wall";
    case BoundaryTag::SigmaMinusL: return "sigma_minus";
    case BoundaryTag::SigmaPlusL: return "sigma_plus";
    case BoundaryTag::SymmetryPlane: return "symmetry";
  }
  return "unknown";
}

std::size_t Mesh::vertex_count() const
{
  return static_cast<std::size_t>(std::count(is_vertex.begin(), is_vertex.end(), 1));
}

double Mesh::area() const
{
  double a = 0.0;
  for (const auto &t : triangles)
  {
    const Point &p = nodes[t[0]], &q = nodes[t[1]], &r = nodes[t[2]];
    a += 0.5 * ((q.x - p.x) * (r.y - p.y) - (r.x - p.x) * (q.y - p.y));
  }
  return a;
}

double Mesh::min_angle_deg() const
{
  double best = 180.0;
  for (const auto &t : triangles)
  {
    for (int c = 0; c < 3; ++c)
    {
      const Point &p = nodes[t[c]], &q = nodes[t[(c + 1) % 3]], &r = nodes[t[(c + 2) % 3]];
      const double ux = q.x - p.x, uy = q.y - p.y, vx = r.x - p.x, vy = r.y - p.y;
      const double ang = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
      best = std::min(best, ang * 180.0 / pi);
    }
  }
  return best;
}

std::vector<int> Mesh::mirror_map(double tol) const
{
  std::map<std::pair<long long, long long>, int> index;
  const double scale = 1.0 / tol;
  auto key = [&](double x, double y) {
    return std::make_pair(std::llround(x * scale), std::llround(y * scale));
  };
  for (std::size_t i = 0; i < nodes.size(); ++i)
  {
    index[key(nodes[i].x, nodes[i].y)] = static_cast<int>(i);
  }
  std::vector<int> out(nodes.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i)
  {
    const auto it = index.find(key(-nodes[i].x, nodes[i].y));
    if (it != index.end())
    {
      out[i] = it->second;
    }
  }
  return out;
}

}  // namespace wginv
