// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "wginv/error.hpp"
#include "wginv/parallel.hpp"
#include "wginv/quadrature.hpp"

namespace wginv
{

namespace
{

constexpr double pi = std::numbers::pi;
constexpr cplx I(0.0, 1.0);
const double nan = std::numeric_limits<double>::quiet_NaN();

cplx branch_point(int n, int sign, double theta, double s)
{
  return std::sqrt(cplx(n * n * pi * pi, 0.0) + s * s * std::exp(cplx(0.0, sign * 2.0 * theta)));
}

// min over s >= 0 of |k - branch_point(s)|: coarse scan then golden-section refinement.
double branch_distance(int n, int sign, double theta, cplx k)
{
  const double s_max = 2.0 * std::abs(k) + 2.0;
  const int samples = 400;
  const double ds = s_max / samples;
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= samples; ++j)
  {
    const double d = std::abs(k - branch_point(n, sign, theta, j * ds));
    if (d < best_d)
    {
      best_d = d;
      best = j;
    }
  }
  double a = std::max(0.0, (best - 1) * ds), b = (best + 1) * ds;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double s) { return std::abs(k - branch_point(n, sign, theta, s)); };
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80; ++it)
  {
    if (fc < fd)
    {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    }
    else
    {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::min({best_d, fc, fd, f(0.0)});
}

std::vector<cplx> to_nodes(const Mesh &mesh, const DofMap &map, const CVec &v)
{
  std::vector<cplx> out(mesh.nodes.size(), cplx(0.0));
  for (int d = 0; d < map.size(); ++d)
  {
    out[static_cast<std::size_t>(map.dof_to_node[static_cast<std::size_t>(d)])] = v(d);
  }
  return out;
}

// Unit L2 norm, phase fixed so the largest entry is real and positive.
void normalize_mode(const Mesh &mesh, std::vector<cplx> &w)
{
  const double nrm = l2_norm(mesh, w);
  if (nrm == 0.0) return;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < w.size(); ++i)
  {
    if (std::abs(w[i]) > std::abs(w[imax])) imax = i;
  }
  const cplx phase = std::abs(w[imax]) > 0.0 ? std::conj(w[imax]) / std::abs(w[imax]) : cplx(1.0);
  for (cplx &z : w) z *= phase / nrm;
}

struct Candidate
{
  cplx lambda;
  double residual;
  CVec vector;
};

// Keeps the innermost fraction of a shift's eigenvalues; never separates eigenvalues that are
// equidistant from the shift (conjugate pairs for real shifts).
std::vector<EigenPair> trusted_window(std::vector<EigenPair> pairs, cplx sigma, double fraction)
{
  std::sort(pairs.begin(), pairs.end(),
            [&](const EigenPair &a, const EigenPair &b) { return std::abs(a.lambda - sigma) < std::abs(b.lambda - sigma); });
  if (pairs.empty()) return pairs;
  std::size_t keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(pairs.size())));
  keep = std::clamp<std::size_t>(keep, 1, pairs.size());
  while (keep < pairs.size())
  {
    const double d0 = std::abs(pairs[keep - 1].lambda - sigma);
    const double d1 = std::abs(pairs[keep].lambda - sigma);
    if (d1 - d0 > 1e-6 * (1.0 + d0)) break;
    ++keep;
  }
  pairs.resize(keep);
  return pairs;
}

}  // namespace

void validate(const ScalingSpec &s)
{
  if (!(s.theta > 0.0 && s.theta < pi / 2.0))
  {
    fail(ErrorCode::InvalidArgument, "scaling angle must lie in (0, pi/2)");
  }
  if (!(s.L > 0.0 && s.L_trunc > s.L))
  {
    fail(ErrorCode::InvalidArgument, "scaling requires 0 < L < L_trunc");
  }
}

cplx scaled_coordinate(const ScalingSpec &s, double x)
{
  if (std::abs(x) < s.L) return x;
  const cplx eta = std::exp(cplx(0.0, s.theta));
  if (x > 0.0) return s.L + (x - s.L) * eta;
  return -s.L + (x + s.L) * (s.conjugated ? std::conj(eta) : eta);
}

const char *to_string(SpectralClass c)
{
  switch (c)
  {
  case SpectralClass::Trapped: return "trapped";
  case SpectralClass::Reflectionless: return "reflectionless";
  case SpectralClass::ComplexResonance: return "complex_resonance";
  case SpectralClass::EssentialBranch: return "essential";
  case SpectralClass::Unclassified: return "unclassified";
  }
  return "unclassified";
}

std::vector<EssentialBranch> essential_branches(const ScalingSpec &s, BcKind wall_bc, int n_max, double t_max,
                                                int samples)
{
  std::vector<EssentialBranch> out;
  const std::vector<int> signs = s.conjugated ? std::vector<int>{-1, 1} : std::vector<int>{-1};
  for (int n = first_index(wall_bc); n <= n_max; ++n)
  {
    for (int sign : signs)
    {
      EssentialBranch b;
      b.n = n;
      b.sign = sign;
      for (int j = 0; j <= samples; ++j)
      {
        const double t = t_max * j / samples;
        b.k.push_back(std::sqrt(cplx(n * n * pi * pi, 0.0) + t * std::exp(cplx(0.0, sign * 2.0 * s.theta))));
      }
      out.push_back(std::move(b));
    }
  }
  return out;
}

double distance_to_essential(const ScalingSpec &s, BcKind wall_bc, cplx k, int n_max)
{
  double d = std::numeric_limits<double>::infinity();
  for (int n = first_index(wall_bc); n <= n_max; ++n)
  {
    d = std::min(d, branch_distance(n, -1, s.theta, k));
    if (s.conjugated) d = std::min(d, branch_distance(n, 1, s.theta, k));
  }
  return d;
}

double layer_attenuation(const ScalingSpec &s, BcKind wall_bc, cplx k)
{
  double b = std::numeric_limits<double>::infinity();
  const int top = static_cast<int>(std::floor(std::abs(k) / pi)) + 1;
  for (int n = first_index(wall_bc); n <= top; ++n)
  {
    b = std::min(b, std::abs(std::sqrt(k * k - cplx(n * n * pi * pi, 0.0))));
  }
  return b * std::sin(s.theta) * (s.L_trunc - s.L);
}

std::vector<cplx> default_shifts(double k_min, double k_max, double dk)
{
  if (!(k_max > k_min) || !(dk > 0.0))
  {
    fail(ErrorCode::InvalidArgument, "shift range must be non-empty");
  }
  std::vector<double> ks;
  for (int n = 0; (n + 0.5) * pi < k_max; ++n)
  {
    if ((n + 0.5) * pi > k_min) ks.push_back((n + 0.5) * pi);
  }
  for (double k = k_min + 0.5 * dk; k < k_max; k += dk) ks.push_back(k);
  std::sort(ks.begin(), ks.end());
  std::vector<cplx> out;
  for (double k : ks) out.emplace_back(k * k, 0.0);
  return out;
}

GeometrySpec scaled_spec(const GeometrySpec &spec, const ScalingSpec &s)
{
  validate(s);
  const auto [lo, hi] = perturbation_extent(spec);
  if (lo <= hi && (lo < -s.L - 1e-12 || hi > s.L + 1e-12))
  {
    fail(ErrorCode::InvalidArgument, "the perturbation must lie inside |x| <= L");
  }
  GeometrySpec out = spec;
  out.half_length = s.L_trunc;
  out.symmetric_half = false;
  out.x_breaks.push_back(-s.L);
  out.x_breaks.push_back(s.L);
  return out;
}

std::vector<cplx> section_overlaps(const std::vector<cplx> &mode, const Mesh &mesh, double x0, BcKind bc, int n_max)
{
  std::vector<int> line;
  const double tol = 1e-9 * (1.0 + std::abs(x0));
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
  {
    if (std::abs(mesh.nodes[i].x - x0) < tol) line.push_back(static_cast<int>(i));
  }
  std::sort(line.begin(), line.end(), [&](int a, int b) {
    return mesh.nodes[static_cast<std::size_t>(a)].y < mesh.nodes[static_cast<std::size_t>(b)].y;
  });
  const int first = first_index(bc);
  std::vector<cplx> out(static_cast<std::size_t>(std::max(0, n_max - first + 1)), cplx(0.0));
  if (line.size() < 2) return out;
  const GaussRule g = gauss_legendre(6);
  const int step = mesh.order == 2 ? 2 : 1;
  if (mesh.order == 2 && line.size() % 2 == 0)
  {
    fail(ErrorCode::InvalidArgument, "the section is not a mesh line");
  }
  for (std::size_t s = 0; s + static_cast<std::size_t>(step) < line.size(); s += static_cast<std::size_t>(step))
  {
    const std::size_t e = s + static_cast<std::size_t>(step);
    if (e >= line.size()) break;
    const double ya = mesh.nodes[static_cast<std::size_t>(line[s])].y;
    const double yb = mesh.nodes[static_cast<std::size_t>(line[e])].y;
    const double half = 0.5 * (yb - ya);
    for (std::size_t q = 0; q < g.nodes.size(); ++q)
    {
      const double t = g.nodes[q];
      const double y = ya + half * (t + 1.0);
      cplx w;
      if (step == 2)
      {
        // Quadratic interpolation at t = -1, 0, 1 (midpoint node halfway by construction).
        const cplx wa = mode[static_cast<std::size_t>(line[s])];
        const cplx wm = mode[static_cast<std::size_t>(line[s + 1])];
        const cplx wb = mode[static_cast<std::size_t>(line[e])];
        w = wa * (0.5 * t * (t - 1.0)) + wm * (1.0 - t * t) + wb * (0.5 * t * (t + 1.0));
      }
      else
      {
        w = mode[static_cast<std::size_t>(line[s])] * (0.5 * (1.0 - t)) +
            mode[static_cast<std::size_t>(line[e])] * (0.5 * (1.0 + t));
      }
      for (int n = first; n <= n_max; ++n)
      {
        out[static_cast<std::size_t>(n - first)] += g.weights[q] * half * w * phi(bc, n, y);
      }
    }
  }
  return out;
}

double rho_indicator(const std::vector<cplx> &mode, const Mesh &mesh, const ScalingSpec &s, double k)
{
  const double nrm = l2_norm(mesh, mode);
  if (nrm == 0.0) return 0.0;
  const int N = static_cast<int>(std::floor(k / pi));
  const std::vector<cplx> a = section_overlaps(mode, mesh, -s.L, BcKind::Neumann, N);
  double rho = 0.0;
  for (const cplx &z : a) rho += std::norm(z / nrm);
  return rho;
}

SpectrumResult compute_spectrum(const GeometrySpec &spec, const ScalingSpec &scaling,
                                const std::vector<cplx> &shifts, const SpectrumOptions &opt)
{
  const GeometrySpec sspec = scaled_spec(spec, scaling);
  auto mesh = std::make_shared<const Mesh>(build_mesh(sspec, opt.target_h, opt.order));
  const ScaledOperators ops = assemble_scaled(*mesh, scaling.coefficients(), spec.wall_bc);

  std::vector<std::vector<EigenPair>> per_shift(shifts.size());
  parallel_for(shifts.size(), [&](std::size_t i) {
    ArnoldiOptions ao = opt.arnoldi;
    ao.accept_partial = true;
    per_shift[i] = trusted_window(eig_shift_invert(ops.K, ops.M, shifts[i], opt.count_per_shift, ao), shifts[i],
                                  opt.keep_fraction);
  });

  std::vector<Candidate> all;
  for (auto &ps : per_shift)
  {
    for (auto &p : ps) all.push_back({p.lambda, p.residual, std::move(p.vector)});
  }
  std::sort(all.begin(), all.end(), [](const Candidate &a, const Candidate &b) {
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  std::vector<Candidate> unique;
  for (auto &c : all)
  {
    bool dup = false;
    for (auto &u : unique)
    {
      if (std::abs(u.lambda - c.lambda) < opt.dedupe_tol * std::max(1.0, std::abs(c.lambda)))
      {
        dup = true;
        if (c.residual < u.residual) u = std::move(c);
        break;
      }
    }
    if (!dup) unique.push_back(std::move(c));
  }

  SpectrumResult r;
  r.scaling = scaling;
  r.mesh = mesh;
  std::sort(unique.begin(), unique.end(), [](const Candidate &a, const Candidate &b) {
    const cplx ka = std::sqrt(a.lambda), kb = std::sqrt(b.lambda);
    if (ka.real() != kb.real()) return ka.real() < kb.real();
    return ka.imag() < kb.imag();
  });
  for (auto &c : unique)
  {
    const cplx k = std::sqrt(c.lambda);
    std::vector<cplx> w = to_nodes(*mesh, ops.dof_map, c.vector);
    normalize_mode(*mesh, w);
    const int n_max = static_cast<int>(std::floor(std::abs(k) / pi)) + 2;
    const double dess = distance_to_essential(scaling, spec.wall_bc, k, n_max);
    SpectralClass cls;
    double rho = nan;
    if (dess < opt.tol_ess || layer_attenuation(scaling, spec.wall_bc, k) < opt.min_layer_attenuation)
    {
      cls = SpectralClass::EssentialBranch;
    }
    else if (std::abs(k.imag()) < opt.tol_real)
    {
      rho = rho_indicator(w, *mesh, scaling, k.real());
      if (rho < opt.rho_threshold) cls = SpectralClass::Trapped;
      else cls = scaling.conjugated ? SpectralClass::Reflectionless : SpectralClass::Unclassified;
    }
    else
    {
      cls = scaling.conjugated ? SpectralClass::Unclassified : SpectralClass::ComplexResonance;
    }
    r.lambdas.push_back(c.lambda);
    r.eigen_k.push_back(k);
    r.modes.push_back(std::move(w));
    r.classes.push_back(cls);
    r.rho_values.push_back(rho);
    r.residuals.push_back(c.residual);
    r.essential_distance.push_back(dess);
  }
  if (scaling.conjugated && mirror_check(spec))
  {
    r.pt_defect = pt_defect(spec, r).spectrum;
  }
  return r;
}

double conjugation_defect(const SpectrumResult &r)
{
  double out = 0.0;
  for (std::size_t i = 0; i < r.eigen_k.size(); ++i)
  {
    if (r.classes[i] == SpectralClass::EssentialBranch) continue;
    double d = std::numeric_limits<double>::infinity();
    for (const cplx &kj : r.eigen_k) d = std::min(d, std::abs(std::conj(r.eigen_k[i]) - kj));
    out = std::max(out, d);
  }
  return out;
}

PtDefect pt_defect(const GeometrySpec &spec, const SpectrumResult &r)
{
  if (!r.scaling.conjugated)
  {
    fail(ErrorCode::InvalidArgument, "PT symmetry holds for the conjugated scaling only");
  }
  if (!mirror_check(spec))
  {
    fail(ErrorCode::NotSymmetric, "the geometry is not mirror-symmetric");
  }
  PtDefect out;
  out.spectrum = conjugation_defect(r);
  const Mesh &mesh = *r.mesh;
  const std::vector<int> mirror = mesh.mirror_map(1e-9);
  if (std::find(mirror.begin(), mirror.end(), -1) != mirror.end())
  {
    fail(ErrorCode::NotSymmetric, "the mesh is not mirror-symmetric");
  }
  for (std::size_t i = 0; i < r.eigen_k.size(); ++i)
  {
    if (std::abs(r.eigen_k[i].imag()) >= 1e-3)
    {
      out.per_mode.push_back(nan);
      continue;
    }
    const std::vector<cplx> &w = r.modes[i];
    std::vector<cplx> pw(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) pw[j] = std::conj(w[static_cast<std::size_t>(mirror[j])]);
    // Optimal phase c = <pw, w> / |<pw, w>| in the nodal inner product.
    cplx ip = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) ip += std::conj(pw[j]) * w[j];
    const cplx c = std::abs(ip) > 0.0 ? ip / std::abs(ip) : cplx(1.0);
    std::vector<cplx> diff(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) diff[j] = w[j] - c * pw[j];
    out.per_mode.push_back(l2_norm(mesh, diff));
  }
  return out;
}

std::vector<CrosscheckRow> reflectionless_crosscheck(const GeometrySpec &spec, const SpectrumResult &r,
                                                     const ScatteringOptions &options, double window, double step,
                                                     double max_imag)
{
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < r.eigen_k.size(); ++i)
  {
    const cplx k = r.eigen_k[i];
    const SpectralClass c = r.classes[i];
    if (c == SpectralClass::EssentialBranch || c == SpectralClass::ComplexResonance) continue;
    if (!(k.real() > 0.0 && k.real() < pi) || std::abs(k.imag()) > max_imag) continue;
    picks.push_back(i);
  }
  std::vector<CrosscheckRow> rows(picks.size());
  auto mesh = std::make_shared<const Mesh>(build_mesh(spec, options.target_h, options.order));
  for (std::size_t j = 0; j < picks.size(); ++j)
  {
    const cplx k = r.eigen_k[picks[j]];
    CrosscheckRow &row = rows[j];
    row.k = k;
    row.cls = r.classes[picks[j]];
    std::vector<double> ks;
    const int half = static_cast<int>(std::lround(window / step));
    for (int s = -half; s <= half; ++s)
    {
      const double kk = k.real() + s * step;
      if (kk > 1e-3 && kk < pi - 1e-3) ks.push_back(kk);
    }
    std::vector<double> absR(ks.size(), nan);
    parallel_for(ks.size(), [&](std::size_t q) {
      absR[q] = std::abs(solve_scattering(mesh, spec, ks[q], IncidentWave{0, Side::Left}, options).R);
    });
    row.abs_R = std::abs(solve_scattering(mesh, spec, k.real(), IncidentWave{0, Side::Left}, options).R);
    std::size_t best = 0;
    for (std::size_t q = 1; q < ks.size(); ++q)
    {
      if (absR[q] < absR[best]) best = q;
    }
    row.min_k = ks.empty() ? k.real() : ks[best];
    row.min_abs_R = ks.empty() ? row.abs_R : absR[best];
  }
  return rows;
}

void write_spectrum_csv(std::ostream &os, const SpectrumResult &r)
{
  os << "Re_k,Im_k,class,rho\n" << std::setprecision(12);
  for (std::size_t i = 0; i < r.eigen_k.size(); ++i)
  {
    os << r.eigen_k[i].real() << ',' << r.eigen_k[i].imag() << ',' << to_string(r.classes[i]) << ',';
    if (std::isnan(r.rho_values[i])) os << "nan";
    else os << r.rho_values[i];
    os << '\n';
  }
}

double plane_wave_residual(const Mesh &mesh, const ScalingSpec &s, cplx k)
{
  const ScaledOperators ops = assemble_scaled(mesh, s.coefficients(), BcKind::Neumann);
  CVec v(ops.dof_map.size());
  for (int d = 0; d < ops.dof_map.size(); ++d)
  {
    const Point &p = mesh.nodes[static_cast<std::size_t>(ops.dof_map.dof_to_node[static_cast<std::size_t>(d)])];
    v(d) = std::exp(I * k * scaled_coordinate(s, p.x));
  }
  const CVec Kv = ops.K * v;
  return (Kv - k * k * (ops.M * v)).norm() / Kv.norm();
}

}  // namespace wginv
