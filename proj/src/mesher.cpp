// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "wginv/error.hpp"
#include "wginv/geometry.hpp"

namespace wginv
{

namespace
{
constexpr double kMergeTol = 1e-10;
constexpr double kGrowth = 0.25;   // cell size grows by at most 25% per cell
constexpr double kMinAngle = 15.0;

struct Break
{
  double pos;
  double size;
};

// Nodes of [a, b] with sizes sa, sb at the ends, growing geometrically up to h.
std::vector<double> subdivide(double a, double b, double sa, double sb, double h)
{
  const double w = b - a;
  sa = std::min(sa, h);
  sb = std::min(sb, h);
  std::vector<double> out;
  if (sa >= h * (1.0 - 1e-12) && sb >= h * (1.0 - 1e-12))
  {
    const int n = std::max(1, static_cast<int>(std::ceil(w / h - 1e-9)));
    for (int j = 0; j <= n; ++j)
    {
      out.push_back(j == n ? b : a + w * j / n);
    }
    return out;
  }
  const int samples = 8192;
  std::vector<double> cum(samples + 1, 0.0);
  for (int s = 0; s < samples; ++s)
  {
    const double xm = a + w * (s + 0.5) / samples;
    const double size = std::min({h, sa + kGrowth * (xm - a), sb + kGrowth * (b - xm)});
    cum[s + 1] = cum[s] + (w / samples) / size;
  }
  const double total = cum[samples];
  const int n = std::max(1, static_cast<int>(std::ceil(total - 1e-9)));
  out.push_back(a);
  int s = 0;
  for (int j = 1; j < n; ++j)
  {
    const double target = total * j / n;
    while (cum[s + 1] < target) ++s;
    const double f = (target - cum[s]) / (cum[s + 1] - cum[s]);
    out.push_back(a + w * (s + f) / samples);
  }
  out.push_back(b);
  return out;
}

std::vector<double> build_axis(std::vector<Break> breaks, double h)
{
  std::sort(breaks.begin(), breaks.end(), [](const Break &p, const Break &q) { return p.pos < q.pos; });
  std::vector<Break> merged;
  for (const Break &b : breaks)
  {
    if (!merged.empty() && b.pos - merged.back().pos < kMergeTol)
    {
      merged.back().size = std::min(merged.back().size, b.size);
    }
    else
    {
      merged.push_back(b);
    }
  }
  std::vector<double> axis{merged.front().pos};
  for (std::size_t i = 0; i + 1 < merged.size(); ++i)
  {
    const std::vector<double> seg = subdivide(merged[i].pos, merged[i + 1].pos, merged[i].size,
                                              merged[i + 1].size, h);
    axis.insert(axis.end(), seg.begin() + 1, seg.end());
  }
  return axis;
}

int find_index(const std::vector<double> &axis, double v)
{
  for (std::size_t i = 0; i < axis.size(); ++i)
  {
    if (std::abs(axis[i] - v) < kMergeTol) return static_cast<int>(i);
  }
  fail(ErrorCode::GeometryInvalid, "internal: breakpoint missing from mesh axis");
}

struct RawMesh
{
  std::vector<Point> verts;
  std::vector<std::array<int, 3>> tris;
};

struct DiskBlock
{
  Disk disk;
  double a;  // half size of the square block
};

class HalfOrFullBuilder
{
public:
  HalfOrFullBuilder(const GeometrySpec &spec, double h, double xa, double xb, double layer_scale)
    : spec_(spec), h_(h), xa_(xa), xb_(xb), layer_scale_(layer_scale)
  {
  }

  RawMesh run()
  {
    plan_blocks();
    make_axes();
    make_grid_vertices();
    mesh_cells();
    mesh_disks();
    mesh_chimneys();
    return compact();
  }

private:
  const GeometrySpec &spec_;
  double h_, xa_, xb_, layer_scale_;
  std::vector<DiskBlock> blocks_;
  std::vector<double> X_, Y_;
  std::vector<int> grid_;  // (i, j) -> vertex id
  RawMesh raw_;

  int gid(int i, int j) const { return grid_[static_cast<std::size_t>(i) * Y_.size() + static_cast<std::size_t>(j)]; }

  double chimney_cell(const Chimney &c) const
  {
    const int n = std::max(4, static_cast<int>(std::ceil(c.width / h_ - 1e-9)));
    return c.width / n;
  }

  void plan_blocks()
  {
    for (const Obstacle &o : spec_.obstacles)
    {
      const Disk *d = std::get_if<Disk>(&o);
      if (!d) continue;
      double gap = std::min(d->cy - d->r, 1.0 - d->cy - d->r);
      gap = std::min(gap, d->cx - d->r - xa_);
      gap = std::min(gap, xb_ - d->cx - d->r);
      for (const Obstacle &q : spec_.obstacles)
      {
        if (&q == &o) continue;
        Rect bb;
        if (const Rect *r = std::get_if<Rect>(&q)) bb = *r;
        else
        {
          const Disk &e = std::get<Disk>(q);
          bb = {e.cx - e.r, e.cx + e.r, e.cy - e.r, e.cy + e.r};
        }
        const double dx = std::max({bb.x0 - d->cx, d->cx - bb.x1, 0.0});
        const double dy = std::max({bb.y0 - d->cy, d->cy - bb.y1, 0.0});
        gap = std::min(gap, std::max(dx, dy) - d->r);
      }
      if (!(gap > 0.0))
      {
        fail(ErrorCode::GeometryInvalid, "disk too close to another feature");
      }
      blocks_.push_back({*d, d->r + 0.6 * gap});
    }
  }

  void make_axes()
  {
    std::vector<Break> bx{{xa_, h_}, {xb_, h_}};
    std::vector<Break> by{{0.0, h_}, {1.0, h_}};
    auto addx = [&](double x, double s) {
      if (x > xa_ + kMergeTol && x < xb_ - kMergeTol) bx.push_back({x, s});
    };
    if (xa_ < 0.0 && xb_ > 0.0) addx(0.0, h_);
    if (spec_.amplitude != 0.0)
    {
      for (double x : spec_.profile.breakpoints()) addx(x, h_);
    }
    for (double x : spec_.x_breaks) addx(x, h_);
    for (const Obstacle &o : spec_.obstacles)
    {
      if (const Rect *r = std::get_if<Rect>(&o))
      {
        addx(r->x0, h_);
        addx(r->x1, h_);
        by.push_back({r->y0, h_});
        by.push_back({r->y1, h_});
      }
    }
    for (const DiskBlock &b : blocks_)
    {
      addx(b.disk.cx - b.a, h_);
      addx(b.disk.cx + b.a, h_);
      by.push_back({b.disk.cy - b.a, h_});
      by.push_back({b.disk.cy + b.a, h_});
    }
    for (const IndexRegion &r : spec_.index_regions)
    {
      addx(r.rect.x0, h_);
      addx(r.rect.x1, h_);
      if (r.rect.y0 > 0.0) by.push_back({r.rect.y0, h_});
      if (r.rect.y1 < 1.0) by.push_back({r.rect.y1, h_});
    }
    for (const Chimney &c : spec_.chimneys)
    {
      const double s = chimney_cell(c);
      addx(c.x - 0.5 * c.width, s);
      addx(c.x + 0.5 * c.width, s);
      if (std::abs(c.x + 0.5 * c.width - xb_) < kMergeTol)
      {
        bx[1].size = std::min(bx[1].size, s);
      }
      by[1].size = std::min(by[1].size, s);
    }
    X_ = build_axis(bx, h_);
    Y_ = build_axis(by, h_);
    refine_steep_columns();
    // Chimney interiors are uniform with at least four cells across.
    for (const Chimney &c : spec_.chimneys)
    {
      const int i0 = find_index(X_, c.x - 0.5 * c.width);
      const int i1 = find_index(X_, std::min(c.x + 0.5 * c.width, xb_));
      const int n = static_cast<int>(std::lround(c.width / chimney_cell(c)));
      if (i1 - i0 != n)
      {
        std::vector<double> nx(X_.begin(), X_.begin() + i0);
        for (int j = 0; j < n; ++j) nx.push_back(X_[i0] + (X_[i1] - X_[i0]) * j / n);
        nx.insert(nx.end(), X_.begin() + i1, X_.end());
        X_ = nx;
      }
    }
  }

  // Columns under a wall of slope s are narrowed to about dy / sqrt(1 + s^2) so the
  // sheared top cells stay close to rhombi.
  void refine_steep_columns()
  {
    if (spec_.amplitude == 0.0 || spec_.profile.is_zero()) return;
    const double dy = Y_.back() - Y_[Y_.size() - 2];
    std::vector<double> nx{X_.front()};
    for (std::size_t i = 0; i + 1 < X_.size(); ++i)
    {
      const double a = X_[i], b = X_[i + 1];
      double slope = 0.0, top = std::numeric_limits<double>::infinity();
      const int samples = 16;
      for (int q = 0; q <= samples; ++q)
      {
        const double x = a + (b - a) * q / samples;
        top = std::min(top, spec_.top(x));
        if (q < samples)
        {
          const double x1 = a + (b - a) * (q + 1) / samples;
          slope = std::max(slope, std::abs(spec_.top(x1) - spec_.top(x)) / (x1 - x));
        }
      }
      const double target = dy * top / std::sqrt(1.0 + slope * slope);
      const int n = std::max(1, static_cast<int>(std::ceil((b - a) / target - 1e-9)));
      for (int q = 1; q <= n; ++q) nx.push_back(q == n ? b : a + (b - a) * q / n);
    }
    X_ = nx;
  }

  void make_grid_vertices()
  {
    grid_.assign(X_.size() * Y_.size(), -1);
    for (std::size_t i = 0; i < X_.size(); ++i)
    {
      const double s = spec_.top(X_[i]);
      for (std::size_t j = 0; j < Y_.size(); ++j)
      {
        grid_[i * Y_.size() + j] = static_cast<int>(raw_.verts.size());
        raw_.verts.push_back({X_[i], Y_[j] * s});
      }
    }
  }

  bool in_block(double xc, double yc) const
  {
    for (const DiskBlock &b : blocks_)
    {
      if (std::abs(xc - b.disk.cx) < b.a && std::abs(yc - b.disk.cy) < b.a) return true;
    }
    return false;
  }

  bool in_rect_obstacle(double xc, double yc) const
  {
    for (const Obstacle &o : spec_.obstacles)
    {
      if (const Rect *r = std::get_if<Rect>(&o))
      {
        if (xc > r->x0 && xc < r->x1 && yc > r->y0 && yc < r->y1) return true;
      }
    }
    return false;
  }

  void quad(int v00, int v10, int v11, int v01, double xc, double yc)
  {
    // Distorted quads (sloped wall columns) split along the shorter diagonal; regular
    // cells use a pattern mirrored across x = 0 and across y = 1/2.
    const Point &p00 = raw_.verts[static_cast<std::size_t>(v00)], &p11 = raw_.verts[static_cast<std::size_t>(v11)];
    const Point &p10 = raw_.verts[static_cast<std::size_t>(v10)], &p01 = raw_.verts[static_cast<std::size_t>(v01)];
    const double d0 = std::hypot(p11.x - p00.x, p11.y - p00.y), d1 = std::hypot(p01.x - p10.x, p01.y - p10.y);
    const bool distorted = std::abs(d0 - d1) > 0.02 * std::max(d0, d1);
    if (distorted ? d0 < d1 : (xc < 0.0) == (yc < 0.5))
    {
      raw_.tris.push_back({v00, v10, v11});
      raw_.tris.push_back({v00, v11, v01});
    }
    else
    {
      raw_.tris.push_back({v00, v10, v01});
      raw_.tris.push_back({v10, v11, v01});
    }
  }

  void mesh_cells()
  {
    for (std::size_t i = 0; i + 1 < X_.size(); ++i)
    {
      const double xc = 0.5 * (X_[i] + X_[i + 1]);
      for (std::size_t j = 0; j + 1 < Y_.size(); ++j)
      {
        const double yc = 0.5 * (Y_[j] + Y_[j + 1]);
        if (in_block(xc, yc) || in_rect_obstacle(xc, yc)) continue;
        const int ii = static_cast<int>(i), jj = static_cast<int>(j);
        quad(gid(ii, jj), gid(ii + 1, jj), gid(ii + 1, jj + 1), gid(ii, jj + 1), xc, yc);
      }
    }
  }

  void mesh_disks()
  {
    for (const DiskBlock &b : blocks_)
    {
      const int i0 = find_index(X_, b.disk.cx - b.a), i1 = find_index(X_, b.disk.cx + b.a);
      const int j0 = find_index(Y_, b.disk.cy - b.a), j1 = find_index(Y_, b.disk.cy + b.a);
      std::vector<int> loop;
      for (int i = i0; i < i1; ++i) loop.push_back(gid(i, j0));
      for (int j = j0; j < j1; ++j) loop.push_back(gid(i1, j));
      for (int i = i1; i > i0; --i) loop.push_back(gid(i, j1));
      for (int j = j1; j > j0; --j) loop.push_back(gid(i0, j));
      const std::size_t P = loop.size();
      // Radial layers sized to match the tangential spacing on the circle.
      const double mean_dist = 1.15 * b.a - b.disk.r;
      const double tangential = 2.0 * std::numbers::pi * b.disk.r / static_cast<double>(P);
      const int m = std::max(2, static_cast<int>(std::ceil(layer_scale_ * mean_dist /
                                                           std::max(tangential, 0.5 * h_))));
      std::vector<std::vector<int>> ring(P, std::vector<int>(static_cast<std::size_t>(m + 1)));
      for (std::size_t k = 0; k < P; ++k)
      {
        const Point outer = raw_.verts[static_cast<std::size_t>(loop[k])];
        const double dx = outer.x - b.disk.cx, dy = outer.y - b.disk.cy;
        const double rr = std::hypot(dx, dy);
        const Point inner{b.disk.cx + b.disk.r * dx / rr, b.disk.cy + b.disk.r * dy / rr};
        for (int l = 0; l < m; ++l)
        {
          const double t = static_cast<double>(l) / m;
          ring[k][static_cast<std::size_t>(l)] = static_cast<int>(raw_.verts.size());
          raw_.verts.push_back({inner.x + t * (outer.x - inner.x), inner.y + t * (outer.y - inner.y)});
        }
        ring[k][static_cast<std::size_t>(m)] = loop[k];
      }
      for (std::size_t k = 0; k < P; ++k)
      {
        const std::size_t k1 = (k + 1) % P;
        for (int l = 0; l < m; ++l)
        {
          const std::size_t L0 = static_cast<std::size_t>(l), L1 = L0 + 1;
          const int a = ring[k][L0], bq = ring[k1][L0], c = ring[k1][L1], d = ring[k][L1];
          const Point &pa = raw_.verts[static_cast<std::size_t>(a)], &pc = raw_.verts[static_cast<std::size_t>(c)];
          const Point &pb = raw_.verts[static_cast<std::size_t>(bq)], &pd = raw_.verts[static_cast<std::size_t>(d)];
          if (std::hypot(pa.x - pc.x, pa.y - pc.y) <= std::hypot(pb.x - pd.x, pb.y - pd.y))
          {
            raw_.tris.push_back({a, bq, c});
            raw_.tris.push_back({a, c, d});
          }
          else
          {
            raw_.tris.push_back({a, bq, d});
            raw_.tris.push_back({bq, c, d});
          }
        }
      }
    }
  }

  void mesh_chimneys()
  {
    const int jt = static_cast<int>(Y_.size()) - 1;
    for (const Chimney &c : spec_.chimneys)
    {
      const int i0 = find_index(X_, c.x - 0.5 * c.width);
      const int i1 = find_index(X_, c.x + 0.5 * c.width);
      const double dx = c.width / (i1 - i0);
      const double cap = std::min(h_, 3.0 * dx);
      const std::vector<double> rows = subdivide(1.0, 1.0 + c.height, dx, cap, cap);
      std::vector<std::vector<int>> ids(static_cast<std::size_t>(i1 - i0 + 1));
      for (int i = i0; i <= i1; ++i)
      {
        auto &col = ids[static_cast<std::size_t>(i - i0)];
        col.push_back(gid(i, jt));
        for (std::size_t r = 1; r < rows.size(); ++r)
        {
          col.push_back(static_cast<int>(raw_.verts.size()));
          raw_.verts.push_back({X_[static_cast<std::size_t>(i)], rows[r]});
        }
      }
      for (int i = i0; i < i1; ++i)
      {
        const auto &ca = ids[static_cast<std::size_t>(i - i0)], &cb = ids[static_cast<std::size_t>(i - i0 + 1)];
        const double xc = 0.5 * (X_[static_cast<std::size_t>(i)] + X_[static_cast<std::size_t>(i + 1)]);
        for (std::size_t r = 0; r + 1 < rows.size(); ++r)
        {
          quad(ca[r], cb[r], cb[r + 1], ca[r + 1], xc, 0.0);
        }
      }
    }
  }

  RawMesh compact()
  {
    std::vector<int> used(raw_.verts.size(), -1);
    RawMesh out;
    for (auto &t : raw_.tris)
    {
      for (int &v : t)
      {
        if (used[static_cast<std::size_t>(v)] < 0)
        {
          used[static_cast<std::size_t>(v)] = static_cast<int>(out.verts.size());
          out.verts.push_back(raw_.verts[static_cast<std::size_t>(v)]);
        }
        v = used[static_cast<std::size_t>(v)];
      }
      out.tris.push_back(t);
    }
    return out;
  }
};

double signed_area(const std::vector<Point> &v, const std::array<int, 3> &t)
{
  const Point &p = v[static_cast<std::size_t>(t[0])], &q = v[static_cast<std::size_t>(t[1])],
              &r = v[static_cast<std::size_t>(t[2])];
  return 0.5 * ((q.x - p.x) * (r.y - p.y) - (r.x - p.x) * (q.y - p.y));
}

RawMesh mirror(const RawMesh &half)
{
  RawMesh full = half;
  std::vector<int> img(half.verts.size());
  for (std::size_t i = 0; i < half.verts.size(); ++i)
  {
    const Point &p = half.verts[i];
    if (p.x == 0.0)
    {
      img[i] = static_cast<int>(i);
    }
    else
    {
      img[i] = static_cast<int>(full.verts.size());
      full.verts.push_back({-p.x, p.y});
    }
  }
  for (const auto &t : half.tris)
  {
    full.tris.push_back({img[static_cast<std::size_t>(t[0])], img[static_cast<std::size_t>(t[2])],
                         img[static_cast<std::size_t>(t[1])]});
  }
  return full;
}

Mesh finalize(const RawMesh &raw, const GeometrySpec &spec, int order, double x_min, double x_max,
              bool half)
{
  std::vector<Point> verts = raw.verts;
  std::vector<std::array<int, 3>> tris = raw.tris;
  for (auto &t : tris)
  {
    const double a = signed_area(verts, t);
    if (a < 0.0) std::swap(t[1], t[2]);
    if (std::abs(a) < 1e-14)
    {
      fail(ErrorCode::MeshQualityFailure, "degenerate triangle");
    }
  }
  // Edge table: (lo, hi) -> (count, midpoint id)
  std::map<std::pair<int, int>, std::pair<int, int>> edges;
  for (const auto &t : tris)
  {
    for (int c = 0; c < 3; ++c)
    {
      const int a = t[static_cast<std::size_t>(c)], b = t[static_cast<std::size_t>((c + 1) % 3)];
      auto &e = edges[{std::min(a, b), std::max(a, b)}];
      e.first += 1;
    }
  }
  std::vector<Point> nodes = verts;
  std::vector<char> is_vertex(verts.size(), 1);
  if (order == 2)
  {
    for (auto &[key, val] : edges)
    {
      val.second = static_cast<int>(nodes.size());
      const Point &p = verts[static_cast<std::size_t>(key.first)], &q = verts[static_cast<std::size_t>(key.second)];
      nodes.push_back({0.5 * (p.x + q.x), 0.5 * (p.y + q.y)});
      is_vertex.push_back(0);
    }
  }
  // Column-ordered numbering: sort by x, then y.
  std::vector<int> perm(nodes.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
    const Point &p = nodes[static_cast<std::size_t>(a)], &q = nodes[static_cast<std::size_t>(b)];
    return p.x < q.x || (p.x == q.x && p.y < q.y);
  });
  std::vector<int> newid(nodes.size());
  for (std::size_t i = 0; i < perm.size(); ++i) newid[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);

  Mesh mesh;
  mesh.order = order;
  mesh.x_min = x_min;
  mesh.x_max = x_max;
  mesh.nodes.resize(nodes.size());
  mesh.is_vertex.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
  {
    mesh.nodes[static_cast<std::size_t>(newid[i])] = nodes[i];
    mesh.is_vertex[static_cast<std::size_t>(newid[i])] = is_vertex[i];
  }
  auto mid = [&](int a, int b) {
    if (order != 2) return -1;
    return newid[static_cast<std::size_t>(edges.at({std::min(a, b), std::max(a, b)}).second)];
  };
  for (const auto &t : tris)
  {
    std::array<int, 3> v{newid[static_cast<std::size_t>(t[0])], newid[static_cast<std::size_t>(t[1])],
                         newid[static_cast<std::size_t>(t[2])]};
    mesh.triangles.push_back(v);
    std::array<int, 6> tn{v[0], v[1], v[2], mid(t[0], t[1]), mid(t[1], t[2]), mid(t[2], t[0])};
    mesh.tri_nodes.push_back(tn);
    const Point &p = verts[static_cast<std::size_t>(t[0])], &q = verts[static_cast<std::size_t>(t[1])],
                &r = verts[static_cast<std::size_t>(t[2])];
    mesh.gamma.push_back(spec.gamma_at((p.x + q.x + r.x) / 3.0, (p.y + q.y + r.y) / 3.0));
  }
  const double tol = 1e-12;
  for (const auto &[key, val] : edges)
  {
    if (val.first != 1) continue;
    BoundaryEdge e;
    e.a = newid[static_cast<std::size_t>(key.first)];
    e.b = newid[static_cast<std::size_t>(key.second)];
    e.mid = order == 2 ? newid[static_cast<std::size_t>(val.second)] : -1;
    const Point &p = mesh.nodes[static_cast<std::size_t>(e.a)], &q = mesh.nodes[static_cast<std::size_t>(e.b)];
    if (std::abs(p.x - x_min) < tol && std::abs(q.x - x_min) < tol)
      e.tag = BoundaryTag::SigmaMinusL;
    else if (!half && std::abs(p.x - x_max) < tol && std::abs(q.x - x_max) < tol)
      e.tag = BoundaryTag::SigmaPlusL;
    else if (half && std::abs(p.x) < tol && std::abs(q.x) < tol)
      e.tag = BoundaryTag::SymmetryPlane;
    else
      e.tag = BoundaryTag::WallGamma;
    if (e.tag != BoundaryTag::WallGamma && p.y > q.y) std::swap(e.a, e.b);
    mesh.boundary.push_back(e);
  }
  for (std::size_t i = 0; i < mesh.boundary.size(); ++i)
  {
    if (mesh.boundary[i].tag == BoundaryTag::SigmaMinusL) mesh.sigma_minus.push_back(static_cast<int>(i));
    if (mesh.boundary[i].tag == BoundaryTag::SigmaPlusL) mesh.sigma_plus.push_back(static_cast<int>(i));
  }
  auto by_y = [&](int a, int b) {
    return mesh.nodes[static_cast<std::size_t>(mesh.boundary[static_cast<std::size_t>(a)].a)].y <
           mesh.nodes[static_cast<std::size_t>(mesh.boundary[static_cast<std::size_t>(b)].a)].y;
  };
  std::sort(mesh.sigma_minus.begin(), mesh.sigma_minus.end(), by_y);
  std::sort(mesh.sigma_plus.begin(), mesh.sigma_plus.end(), by_y);
  return mesh;
}
}  // namespace

Mesh build_mesh(const GeometrySpec &spec, double target_h, int order)
{
  validate(spec);
  if (!(target_h > 0.0 && target_h < 1.0))
  {
    fail(ErrorCode::InvalidArgument, "target_h must lie in (0, 1)");
  }
  if (order != 1 && order != 2)
  {
    fail(ErrorCode::InvalidArgument, "polynomial order must be 1 or 2");
  }
  const double L = spec.half_length;
  const bool symmetric = !spec.symmetric_half && mirror_check(spec);
  const bool has_disk = std::any_of(spec.obstacles.begin(), spec.obstacles.end(),
                                    [](const Obstacle &o) { return std::holds_alternative<Disk>(o); });
  const double scales[] = {1.0, 1.5, 0.7, 2.0};
  Mesh mesh;
  for (double scale : scales)
  {
    if (spec.symmetric_half)
    {
      mesh = finalize(HalfOrFullBuilder(spec, target_h, -L, 0.0, scale).run(), spec, order, -L, 0.0, true);
    }
    else if (symmetric)
    {
      const GeometrySpec h = half_guide(spec);
      mesh = finalize(mirror(HalfOrFullBuilder(h, target_h, -L, 0.0, scale).run()), spec, order, -L, L, false);
    }
    else
    {
      mesh = finalize(HalfOrFullBuilder(spec, target_h, -L, L, scale).run(), spec, order, -L, L, false);
    }
    // Chimney grading produces flat cells along the top wall by construction.
    if (!spec.chimneys.empty() || mesh.min_angle_deg() > kMinAngle)
    {
      return mesh;
    }
    if (!has_disk) break;
  }
  fail(ErrorCode::MeshQualityFailure,
       "minimum angle " + std::to_string(mesh.min_angle_deg()) + " deg below threshold");
}

}  // namespace wginv
