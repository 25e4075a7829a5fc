// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/toy1d.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <iomanip>
#include <numbers>

#include "wginv/error.hpp"

namespace wginv::toy1d
{

namespace
{
constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};
}  // namespace

cplx reflection_exact(const Config &cfg, double k)
{
  const double c = std::cos(k) * std::cos(k * (1.0 + cfg.eps));
  const double s = std::sin(k * (2.0 + cfg.eps));
  return cplx(c, s) / cplx(c, -s);
}

JunctionSolution solve_junction_system(const Config &cfg, double k)
{
  const double ck = std::cos(k), sk = std::sin(k);
  const double ce = std::cos(k * (1.0 + cfg.eps)), se = std::sin(k * (1.0 + cfg.eps));
  Eigen::Matrix3cd m;
  m << 1.0, -ck, 0.0,
       0.0, ck, -ce,
       I, sk, se;
  const Eigen::Vector3cd f(-1.0, 0.0, I);
  JunctionSolution sol;
  sol.det = cplx(std::sin(k * (2.0 + cfg.eps)), ck * ce);
  if (std::abs(sol.det) < kNearSingularDet)
  {
    sol.near_singular = true;
    sol.R = reflection_exact(cfg, k);
    sol.a = std::numeric_limits<double>::quiet_NaN();
    sol.b = std::numeric_limits<double>::quiet_NaN();
    return sol;
  }
  const Eigen::Vector3cd x = m.partialPivLu().solve(f);
  sol.R = x(0);
  sol.a = x(1);
  sol.b = x(2);
  return sol;
}

cplx fano_path(double eps, double param, PathKind kind)
{
  double k = 0.0;
  if (kind == PathKind::Linear)
  {
    if (std::abs(param + pi / 4.0) < 1e-14)
    {
      fail(ErrorCode::PathSingular, "linear path with k' = -pi/4");
    }
    k = pi / 2.0 + eps * param;
  }
  else
  {
    k = pi / 2.0 - eps * pi / 4.0 + eps * eps * param;
  }
  return reflection_exact(Config{eps}, k);
}

cplx linear_path_expansion(double eps, double kprime)
{
  return -1.0 + eps * (-2.0 * I * kprime * (pi + 2.0 * kprime) / (pi + 4.0 * kprime));
}

cplx mobius_g(double mu)
{
  const double s = 32.0 * mu - 4.0 * pi;
  return cplx(pi * pi, s) / cplx(pi * pi, -s);
}

double mobius_g_inverse(cplx z)
{
  // g = (a + is)/(a - is) with a = pi^2 gives is = a (g - 1)/(g + 1).
  if (std::abs(z + 1.0) < 1e-15)
  {
    fail(ErrorCode::InvalidArgument, "-1 is not in the range of the limit map");
  }
  const cplx is = pi * pi * (z - 1.0) / (z + 1.0);
  return (is.imag() + 4.0 * pi) / 32.0;
}

std::vector<double> unwrapped_phase(const Config &cfg, const std::vector<double> &ks)
{
  std::vector<double> out;
  out.reserve(ks.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i)
  {
    double p = std::arg(reflection_exact(cfg, ks[i]));
    if (i > 0)
    {
      while (p - prev > pi) p -= 2.0 * pi;
      while (p - prev < -pi) p += 2.0 * pi;
    }
    out.push_back(p);
    prev = p;
  }
  return out;
}

void write_sweep_csv(std::ostream &os, const Config &cfg, double k0, double k1, int steps)
{
  std::vector<double> ks;
  for (int i = 0; i <= steps; ++i)
  {
    ks.push_back(k0 + (k1 - k0) * i / steps);
  }
  const std::vector<double> ph = unwrapped_phase(cfg, ks);
  os << "k,Re_R,Im_R,phase\n" << std::setprecision(17);
  for (std::size_t i = 0; i < ks.size(); ++i)
  {
    const cplx r = reflection_exact(cfg, ks[i]);
    os << ks[i] << ',' << r.real() << ',' << r.imag() << ',' << ph[i] << '\n';
  }
}

void write_mobius_csv(std::ostream &os, double eps, double mu0, double mu1, int steps)
{
  os << "mu,Re_g,Im_g,Re_R,Im_R\n" << std::setprecision(17);
  for (int i = 0; i <= steps; ++i)
  {
    const double mu = mu0 + (mu1 - mu0) * i / steps;
    const cplx g = mobius_g(mu);
    const cplx r = fano_path(eps, mu, PathKind::Parabolic);
    os << mu << ',' << g.real() << ',' << g.imag() << ',' << r.real() << ',' << r.imag() << '\n';
  }
}

}  // namespace wginv::toy1d
