// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wginv/error.hpp"
#include "wginv/modes.hpp"
#include "wginv/quadrature.hpp"

using namespace wginv;
constexpr double pi = std::numbers::pi;

TEST(Modes, BranchSqrtHasNonNegativeImaginaryPart)
{
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 100000; ++i)
  {
    const cplx z(u(rng), u(rng));
    const cplx s = branch_sqrt(z);
    ASSERT_GE(s.imag(), 0.0);
    ASSERT_LT(std::abs(s * s - z), 1e-12 * (1.0 + std::abs(z)));
  }
  // Positive reals map to positive reals; negative reals to the positive imaginary axis.
  EXPECT_DOUBLE_EQ(branch_sqrt(4.0).real(), 2.0);
  EXPECT_NEAR(branch_sqrt(-4.0).imag(), 2.0, 1e-15);
  EXPECT_NEAR(branch_sqrt(-4.0).real(), 0.0, 1e-15);
}

TEST(Modes, PropagationConstants)
{
  const double k = 1.5 * pi;
  const cplx b1 = beta(BcKind::Dirichlet, k, 1);
  EXPECT_NEAR(b1.real(), pi * std::sqrt(1.25), 1e-12);
  EXPECT_EQ(b1.imag(), 0.0);
  const cplx b2 = beta(BcKind::Dirichlet, k, 2);
  EXPECT_NEAR(b2.real(), 0.0, 1e-15);
  EXPECT_NEAR(b2.imag(), pi * std::sqrt(1.75), 1e-12);
  EXPECT_NEAR(beta(BcKind::Neumann, 0.8 * pi, 0).real(), 0.8 * pi, 1e-15);
}

TEST(Modes, CountsAndCutoffs)
{
  EXPECT_EQ(propagating_count(BcKind::Neumann, 0.5 * pi), 1);
  EXPECT_EQ(propagating_count(BcKind::Dirichlet, 0.5 * pi), 0);
  EXPECT_EQ(propagating_count(BcKind::Dirichlet, 2.5 * pi), 2);
  EXPECT_EQ(propagating_count(BcKind::Neumann, 2.5 * pi), 3);
  EXPECT_EQ(highest_propagating_index(1.5 * pi), 1);
  try
  {
    check_wavenumber(2.0 * pi);
    FAIL() << "threshold accepted";
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::CutoffWavenumber);
  }
  EXPECT_THROW(check_wavenumber(-1.0), Error);
  EXPECT_THROW(phi(BcKind::Dirichlet, 0, 0.5), Error);
}

// Gauss-Legendre with 40 points integrates products of trigonometric modes up to n = 10 to roundoff.
TEST(Modes, TransverseOrthonormality)
{
  const GaussRule g = gauss_legendre(40);
  for (BcKind bc : {BcKind::Dirichlet, BcKind::Neumann})
  {
    for (int m = first_index(bc); m <= 10; ++m)
    {
      for (int n = first_index(bc); n <= 10; ++n)
      {
        double s = 0.0;
        for (std::size_t q = 0; q < g.nodes.size(); ++q)
        {
          const double y = 0.5 * (g.nodes[q] + 1.0);
          s += 0.5 * g.weights[q] * phi(bc, m, y) * phi(bc, n, y);
        }
        EXPECT_NEAR(s, m == n ? 1.0 : 0.0, 1e-12) << to_string(bc) << ' ' << m << ' ' << n;
      }
    }
  }
}

TEST(Modes, DerivativeMatchesFiniteDifference)
{
  for (BcKind bc : {BcKind::Dirichlet, BcKind::Neumann})
  {
    for (int n = first_index(bc); n <= 4; ++n)
    {
      const double y = 0.37, h = 1e-6;
      const double fd = (phi(bc, n, y + h) - phi(bc, n, y - h)) / (2.0 * h);
      EXPECT_NEAR(dphi(bc, n, y), fd, 1e-6 * (1.0 + n * n));
    }
  }
}

// Smallest eigenvalue of the 1D Dirichlet finite-difference Laplacian by inverse iteration.
TEST(Modes, PoincareConstantOfTheTransverseSection)
{
  const int n = 2000;
  const double h = 1.0 / (n + 1);
  std::vector<double> v(n, 1.0), w(n);
  double lambda = 0.0;
  for (int it = 0; it < 50; ++it)
  {
    // Thomas algorithm for tridiag(-1, 2, -1) / h^2.
    std::vector<double> c(n), d(n);
    const double a = -1.0 / (h * h), b = 2.0 / (h * h);
    c[0] = a / b;
    d[0] = v[0] / b;
    for (int i = 1; i < n; ++i)
    {
      const double m = b - a * c[i - 1];
      c[i] = a / m;
      d[i] = (v[i] - a * d[i - 1]) / m;
    }
    w[n - 1] = d[n - 1];
    for (int i = n - 2; i >= 0; --i) w[i] = d[i] - c[i] * w[i + 1];
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i)
    {
      num += v[i] * w[i];
      den += w[i] * w[i];
    }
    lambda = num / den;
    const double nrm = std::sqrt(den);
    for (int i = 0; i < n; ++i) v[i] = w[i] / nrm;
  }
  EXPECT_NEAR(lambda, pi * pi, 1e-4);
}

TEST(Modes, FluxNormalizedFieldCarriesUnitFlux)
{
  const double k = 2.2;
  const ModeBasis plain = ModeBasis::make(BcKind::Neumann, k, 5);
  const ModeBasis flux = ModeBasis::make(BcKind::Neumann, k, 5, Normalization::FluxNormalized);
  for (int n = 0; n <= 5; ++n)
  {
    const cplx a = mode_field(plain, n, 1, 0.3, 0.2);
    const cplx b = mode_field(flux, n, 1, 0.3, 0.2);
    EXPECT_NEAR(std::abs(a / b), std::sqrt(2.0 * std::abs(plain.beta_of(n))), 1e-12);
  }
  // Evanescent modes decay in the propagation direction.
  EXPECT_LT(std::abs(mode_field(plain, 3, 1, 1.0, 0.2)), std::abs(mode_field(plain, 3, 1, 0.0, 0.2)));
}

TEST(Modes, DissipativeBetaTendsToLossless)
{
  for (int n = 0; n <= 3; ++n)
  {
    const cplx b0 = beta(BcKind::Neumann, 2.0, n);
    const cplx be = beta_dissipative(BcKind::Neumann, 2.0, 1e-9, n);
    EXPECT_NEAR(std::abs(be - b0), 0.0, 1e-6);
    EXPECT_GE(be.imag(), 0.0);
  }
}
