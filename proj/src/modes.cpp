// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/modes.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wginv/error.hpp"

namespace wginv
{

namespace
{
constexpr double pi = std::numbers::pi;

void check_index(BcKind bc, int n)
{
  if (n < first_index(bc))
  {
    fail(ErrorCode::BadIndex, "mode index " + std::to_string(n) + " not admissible for " +
                                  to_string(bc) + " walls");
  }
}
}  // namespace

const char *to_string(BcKind bc) { return bc == BcKind::Dirichlet ? "dirichlet" : "neumann"; }

cplx branch_sqrt(cplx z)
{
  const double r = std::abs(z);
  if (r == 0.0)
  {
    return {0.0, 0.0};
  }
  double theta = std::atan2(z.imag(), z.real());
  if (theta < 0.0)
  {
    theta += 2.0 * pi;
  }
  // atan2 of (-0.0, negative) yields -pi, which maps to pi.
  if (theta >= 2.0 * pi)
  {
    theta -= 2.0 * pi;
  }
  const double s = std::sqrt(r);
  return {s * std::cos(0.5 * theta), s * std::sin(0.5 * theta)};
}

int first_index(BcKind bc) { return bc == BcKind::Dirichlet ? 1 : 0; }

int highest_propagating_index(double k)
{
  check_wavenumber(k);
  return static_cast<int>(std::floor(k / pi));
}

int propagating_count(BcKind bc, double k)
{
  const int n = highest_propagating_index(k);
  return bc == BcKind::Dirichlet ? n : n + 1;
}

void check_wavenumber(double k)
{
  if (!(k > 0.0) || !std::isfinite(k))
  {
    fail(ErrorCode::InvalidArgument, "wavenumber must be positive and finite");
  }
  const double q = k / pi;
  if (std::abs(q - std::round(q)) < 1e-12 * std::max(1.0, q))
  {
    fail(ErrorCode::CutoffWavenumber, "k = " + std::to_string(k) + " is a threshold n*pi");
  }
}

cplx beta(BcKind bc, double k, int n)
{
  check_index(bc, n);
  check_wavenumber(k);
  const double nn = n * pi;
  return branch_sqrt(cplx(k * k - nn * nn, 0.0));
}

cplx beta_dissipative(BcKind bc, double k, double eta, int n)
{
  check_index(bc, n);
  if (eta == 0.0)
  {
    return beta(bc, k, n);
  }
  const double nn = n * pi;
  return branch_sqrt(cplx(k * k - nn * nn, k * eta));
}

double phi(BcKind bc, int n, double y)
{
  check_index(bc, n);
  if (bc == BcKind::Dirichlet)
  {
    return std::numbers::sqrt2 * std::sin(n * pi * y);
  }
  return n == 0 ? 1.0 : std::numbers::sqrt2 * std::cos(n * pi * y);
}

double dphi(BcKind bc, int n, double y)
{
  check_index(bc, n);
  if (bc == BcKind::Dirichlet)
  {
    return std::numbers::sqrt2 * n * pi * std::cos(n * pi * y);
  }
  return n == 0 ? 0.0 : -std::numbers::sqrt2 * n * pi * std::sin(n * pi * y);
}

ModeBasis ModeBasis::make(BcKind bc, double k, int max_index, Normalization normalization)
{
  check_wavenumber(k);
  if (max_index < first_index(bc))
  {
    fail(ErrorCode::BadIndex, "max_index below the first admissible mode");
  }
  ModeBasis b;
  b.bc = bc;
  b.k = k;
  b.max_index = max_index;
  b.normalization = normalization;
  for (int n = first_index(bc); n <= max_index; ++n)
  {
    b.betas.push_back(beta(bc, k, n));
  }
  return b;
}

cplx ModeBasis::beta_of(int n) const
{
  check_index(bc, n);
  if (n > max_index)
  {
    fail(ErrorCode::BadIndex, "mode index exceeds basis size");
  }
  return betas[static_cast<std::size_t>(n - first())];
}

cplx mode_field(const ModeBasis &basis, int n, int sign, double x, double y)
{
  const cplx b = basis.beta_of(n);
  const cplx phase = std::exp(cplx(0.0, static_cast<double>(sign)) * b * x);
  cplx w = phase * phi(basis.bc, n, y);
  if (basis.normalization == Normalization::FluxNormalized)
  {
    w /= std::sqrt(2.0 * std::abs(b));
  }
  return w;
}

}  // namespace wginv
