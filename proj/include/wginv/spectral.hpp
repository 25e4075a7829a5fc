// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_SPECTRAL_HPP
#define WGINV_SPECTRAL_HPP

#include <iosfwd>
#include <memory>
#include <numbers>
#include <vector>

#include "wginv/fem.hpp"
#include "wginv/geometry.hpp"
#include "wginv/linalg.hpp"
#include "wginv/scattering.hpp"

namespace wginv
{

// Complex scaling x -> +-L + (x -+ L) exp(i theta) beyond |x| = L. The conjugated variant
// uses exp(-i theta) on the left lead, which selects ingoing waves there.
struct ScalingSpec
{
  double theta = std::numbers::pi / 4.0;
  double L = 1.0;
  double L_trunc = 12.0;  // homogeneous Dirichlet at x = +-L_trunc
  bool conjugated = false;

  ScalingCoefficients coefficients() const { return {theta, L, conjugated}; }
};

// Throws InvalidArgument unless 0 < theta < pi/2 and 0 < L < L_trunc.
void validate(const ScalingSpec &scaling);

// Complex coordinate of the scaled abscissa x.
cplx scaled_coordinate(const ScalingSpec &scaling, double x);

enum class SpectralClass
{
  Trapped,
  Reflectionless,
  ComplexResonance,
  EssentialBranch,
  Unclassified
};

const char *to_string(SpectralClass c);

// k = sqrt(n^2 pi^2 + t exp(sign 2 i theta)), t in [0, t_max].
struct EssentialBranch
{
  int n = 0;
  int sign = -1;
  std::vector<cplx> k;
};

// Classical scaling has the sign -1 branches only; conjugated scaling has both signs.
std::vector<EssentialBranch> essential_branches(const ScalingSpec &scaling, BcKind wall_bc, int n_max,
                                                double t_max, int samples = 400);

// min over lead modes n <= floor(|k|/pi) + 1 of |beta_n(k)| sin(theta) (L_trunc - L): the
// attenuation (in nepers) a scaled lead wave accumulates before the truncation.
double layer_attenuation(const ScalingSpec &scaling, BcKind wall_bc, cplx k);

// k-plane distance from k to the nearest branch with index <= n_max (exact projection).
double distance_to_essential(const ScalingSpec &scaling, BcKind wall_bc, cplx k, int n_max);

struct SpectrumOptions
{
  double target_h = 0.05;
  int order = 2;
  int count_per_shift = 24;
  double keep_fraction = 0.75;  // innermost part of each shift's window that is trusted
  double tol_real = 1e-3;       // |Im k| below this makes a real candidate
  double tol_ess = 0.02;        // k-plane distance to an essential branch
  double rho_threshold = 1e-6;
  // Eigenvalues whose slowest lead mode loses less than exp(-min_layer_attenuation) across the
  // scaled layer are part of the truncated continuum near a threshold and are masked.
  double min_layer_attenuation = 4.0;
  double dedupe_tol = 1e-8;     // relative lambda distance
  ArnoldiOptions arnoldi;
};

struct SpectrumResult
{
  ScalingSpec scaling;
  std::vector<cplx> lambdas;  // eigenvalues k^2, sorted by Re k
  std::vector<cplx> eigen_k;  // principal square roots
  std::vector<std::vector<cplx>> modes;  // nodal values, unit L2 norm
  std::vector<SpectralClass> classes;
  std::vector<double> rho_values;  // NaN unless the eigenvalue is a real candidate
  std::vector<double> residuals;
  std::vector<double> essential_distance;
  double pt_defect = -1.0;  // set for conjugated scaling on mirror-symmetric specs
  std::shared_ptr<const Mesh> mesh;
};

// Default shifts: real k at the midpoints between consecutive thresholds below k_max plus
// a uniform grid of spacing dk on (k_min, k_max). Returned as lambda = k^2.
std::vector<cplx> default_shifts(double k_min, double k_max, double dk = 0.25);

// Spec used for the eigenproblem: ends at +-L_trunc, mesh columns at +-L.
GeometrySpec scaled_spec(const GeometrySpec &spec, const ScalingSpec &scaling);

SpectrumResult compute_spectrum(const GeometrySpec &spec, const ScalingSpec &scaling,
                                const std::vector<cplx> &shifts, const SpectrumOptions &options = {});

// Sum over n = 0..floor(k/pi) of |integral of w(-L, y) phi_n(y) dy|^2 with the Neumann
// modes phi_0 = 1, phi_n = sqrt(2) cos(n pi y). The mode is first scaled to unit L2 norm.
double rho_indicator(const std::vector<cplx> &mode, const Mesh &mesh, const ScalingSpec &scaling, double k);

// Section overlaps integral of w(x0, y) phi_n(y) dy along the vertical mesh line x = x0.
std::vector<cplx> section_overlaps(const std::vector<cplx> &mode, const Mesh &mesh, double x0, BcKind bc,
                                   int n_max);

struct PtDefect
{
  double spectrum = 0.0;          // max over eigenvalues of the k-distance from conj(k) to the set
  std::vector<double> per_mode;   // min over phases of ||w - c conj(P w)||, NaN for non-real k
};

// Max over unmasked eigenvalues k of the distance from conj(k) to the computed set. No symmetry
// is assumed; on a mirror-symmetric guide with conjugated scaling it vanishes up to roundoff.
double conjugation_defect(const SpectrumResult &result);

// Throws NotSymmetric when the spec or mesh lacks mirror symmetry, InvalidArgument for
// classical scaling.
PtDefect pt_defect(const GeometrySpec &spec, const SpectrumResult &result);

struct CrosscheckRow
{
  cplx k;
  SpectralClass cls = SpectralClass::Unclassified;
  double abs_R = 0.0;      // |R| at Re k
  double min_k = 0.0;      // location of the local |R| minimum near Re k
  double min_abs_R = 0.0;
};

// For each eigenvalue with 0 < Re k < pi (and Reflectionless, Trapped or near-real Unclassified
// class) solves the scattering problem at Re k and scans Re k +- window for the |R| minimum.
std::vector<CrosscheckRow> reflectionless_crosscheck(const GeometrySpec &spec, const SpectrumResult &result,
                                                     const ScatteringOptions &options = {},
                                                     double window = 0.1, double step = 0.005,
                                                     double max_imag = 0.2);

void write_spectrum_csv(std::ostream &os, const SpectrumResult &result);

// Empty-guide pathology: relative residual ||K v - k^2 M v|| / ||K v|| of the nodal samples of
// exp(i k x) composed with the scaling (conjugated scaling, gamma = 1).
double plane_wave_residual(const Mesh &mesh, const ScalingSpec &scaling, cplx k);

}  // namespace wginv

#endif  // WGINV_SPECTRAL_HPP
