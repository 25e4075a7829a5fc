// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_TOY1D_HPP
#define WGINV_TOY1D_HPP

#include <complex>
#include <ostream>
#include <vector>

namespace wginv::toy1d
{

using cplx = std::complex<double>;

// Graph waveguide: a line with two finite branches attached at the junction,
// of lengths 1 and 1 + eps.
struct Config
{
  double eps = 0.0;
};

// Closed-form reflection coefficient; unit modulus for every real (eps, k).
cplx reflection_exact(const Config &cfg, double k);

struct JunctionSolution
{
  cplx R;
  cplx a;
  cplx b;
  cplx det;
  bool near_singular = false;  // |det| < 1e-12; R then comes from the closed form
};

// Solves the 3x3 junction system for (R, a, b).
JunctionSolution solve_junction_system(const Config &cfg, double k);

constexpr double kNearSingularDet = 1e-12;

enum class PathKind
{
  Linear,    // k = pi/2 + eps k'
  Parabolic  // k = pi/2 - eps pi/4 + eps^2 mu
};

// Reflection along a path through the singular point (eps, k) = (0, pi/2).
cplx fano_path(double eps, double param, PathKind kind);

// First-order expansion of the linear path: -1 + eps * (-2ik'(pi + 2k') / (pi + 4k')).
cplx linear_path_expansion(double eps, double kprime);

// Limit map of the parabolic path.
cplx mobius_g(double mu);

// Inverse of mobius_g on the unit circle minus {-1}.
double mobius_g_inverse(cplx z);

// Unwrapped phase of R along a k grid.
std::vector<double> unwrapped_phase(const Config &cfg, const std::vector<double> &ks);

// CSV emitter: k,Re_R,Im_R,phase at steps + 1 equispaced wavenumbers.
void write_sweep_csv(std::ostream &os, const Config &cfg, double k0, double k1, int steps);

// CSV emitter for the limit curve: mu,Re_g,Im_g,Re_R,Im_R at the given eps, steps + 1 rows.
void write_mobius_csv(std::ostream &os, double eps, double mu0, double mu1, int steps);

}  // namespace wginv::toy1d

#endif  // WGINV_TOY1D_HPP
