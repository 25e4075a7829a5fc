// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_MODES_HPP
#define WGINV_MODES_HPP

#include <complex>
#include <vector>

namespace wginv
{

using cplx = std::complex<double>;

enum class BcKind
{
  Dirichlet,
  Neumann
};

enum class Normalization
{
  Plain,
  FluxNormalized
};

const char *to_string(BcKind bc);

// Square root with arg(z) taken in [0, 2pi), so Im(branch_sqrt(z)) >= 0.
cplx branch_sqrt(cplx z);

// Lowest admissible transverse index: 1 for Dirichlet, 0 for Neumann.
int first_index(BcKind bc);

// Largest n with n*pi < k; the highest propagating index.
int highest_propagating_index(double k);

// Number of propagating transverse modes.
int propagating_count(BcKind bc, double k);

// Throws CutoffWavenumber when k is a threshold n*pi, InvalidArgument when k <= 0.
void check_wavenumber(double k);

cplx beta(BcKind bc, double k, int n);

// beta_n for the absorbing problem k^2 -> k^2 + i k eta.
cplx beta_dissipative(BcKind bc, double k, double eta, int n);

double phi(BcKind bc, int n, double y);
double dphi(BcKind bc, int n, double y);

struct ModeBasis
{
  BcKind bc = BcKind::Dirichlet;
  double k = 0.0;
  int max_index = 0;
  Normalization normalization = Normalization::Plain;
  std::vector<cplx> betas;  // betas[n - first_index(bc)]

  static ModeBasis make(BcKind bc, double k, int max_index,
                        Normalization normalization = Normalization::Plain);

  int first() const { return first_index(bc); }
  cplx beta_of(int n) const;
  int propagating() const { return propagating_count(bc, k); }
};

// w_n^{sign}(x, y) = exp(sign * i beta_n x) phi_n(y), divided by sqrt(2|beta_n|)
// for the flux-normalized variant. sign is +1 or -1.
cplx mode_field(const ModeBasis &basis, int n, int sign, double x, double y);

}  // namespace wginv

#endif  // WGINV_MODES_HPP
