// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_DESIGN_HPP
#define WGINV_DESIGN_HPP

#include <string>
#include <vector>

#include "wginv/geometry.hpp"
#include "wginv/profile.hpp"
#include "wginv/scattering.hpp"

namespace wginv
{

// First-order variations of R and T for the top wall y = 1 + eps * mu(x), eps -> 0.
// Dirichlet (k in (pi, 2pi)): dR = (i pi^2 / beta_1) int mu e^{2 i beta_1 x}, dT = (i pi^2 / beta_1) int mu.
// Neumann (k in (0, pi)):     dR = i k int mu e^{2 i k x},               dT = 0.
cplx dR0(BcKind bc, double k, const Profile &mu);
cplx dT0(BcKind bc, double k, const Profile &mu);

struct DesignBasis
{
  BcKind bc = BcKind::Dirichlet;
  double k = 0.0;
  std::vector<Profile> mu;  // mu_0 .. mu_p, p = 2 (zero R) or 3 (perfect T)
  // verified[j]: mu_j satisfies its derivative relation to 1e-10.
  std::vector<bool> verified;

  bool all_verified() const;
  Profile combination(const std::vector<double> &tau) const;  // mu_0 + sum tau_j mu_j
};

enum class Mu0Kind
{
  Sine,  // odd sine profile of the standard basis
  Tent   // |x| - delta (Neumann only)
};

// Zero-reflection basis: dR(mu_0) = 0, dR(mu_1) = 1, dR(mu_2) = i.
DesignBasis zero_r_basis(BcKind bc, double k, Mu0Kind mu0 = Mu0Kind::Sine);

// Perfect-transmission basis (Dirichlet): the map mu -> (Re dR, Im dR, Im dT) sends
// mu_0 to 0 and mu_1, mu_2, mu_3 to the unit vectors.
DesignBasis perfect_t_basis(double k);

struct DesignStep
{
  std::vector<double> tau;
  cplx R = 0.0;
  cplx T = 0.0;
};

struct DesignState
{
  BcKind bc = BcKind::Dirichlet;
  double k = 0.0;
  double epsilon = 0.0;
  std::vector<double> tau;
  int iteration = 0;
  std::vector<DesignStep> history;  // one entry per solve; the last one is the reported state
  bool converged = false;
  bool diverged = false;
  double eta_stop = 1e-4;
  cplx R = 0.0;
  cplx T = 0.0;
  GeometrySpec geometry;  // final geometry
  std::string note;
};

struct DesignOptions
{
  ScatteringOptions scattering{};
  double r_max = 10.0;
  bool throw_on_divergence = true;
};

// tau <- tau - (Re R, Im R) / eps, R from a fresh mesh and solve at every step.
DesignState fixed_point_zero_R(const GeometrySpec &base, const DesignBasis &basis, double eps, double eta_stop,
                               int max_iter, const DesignOptions &options = {});

// tau <- tau - (Re R, Im R, Im T) / eps; requires Re T > 0 at convergence.
DesignState fixed_point_perfect_T(const GeometrySpec &base, const DesignBasis &basis, double eps, double eta_stop,
                                  int max_iter, const DesignOptions &options = {});

struct ChimneyPrediction
{
  cplx R = 0.0;
  cplx T = 1.0;
};

// R ~ eps_c i k sum w_+(M_n)^2 tan(k h_n), T ~ 1 + eps_c i k sum w_+(M_n) w_-(M_n) tan(k h_n) with
// flux-normalized w_+- = e^{+-ikx} / sqrt(2k); R and T refer to the plain modes e^{+-ikx}.
ChimneyPrediction chimney_predictor(const std::vector<Chimney> &chimneys, double eps_c, double k);

// l_m = pi (m + 1/2) / k, m = 0 .. m_max.
std::vector<double> resonance_lengths(double k, int m_max);

// Three chimneys centred at phases 2 k x_n spaced by 2 pi / 3, heights pi / k (tan k h = 0).
std::vector<Chimney> default_chimney_layout(double k, double eps_c);

// Adjusts the chimney heights to drive (Re R, Im R, Im T) to 0. The update uses the
// predictor's Jacobian d/dh_n = (eps_c k / 2) sec^2(k h_n) (Re(i e_n), Im(i e_n), 1), e_n = e^{2ikx_n}.
DesignState chimney_tune_zero_R(const GeometrySpec &base, double eps_c, double k, double eta_stop, int max_iter,
                                const DesignOptions &options = {});

// Experimental: two ligaments (heights h1, h2, spacing d) tuned towards T = 1 with a
// finite-difference Jacobian on (Re R, Im R, Im T).
DesignState two_ligament_tune(const GeometrySpec &base, double eps_c, double k, double h1, double h2, double d,
                              double eta_stop, int max_iter, const DesignOptions &options = {});

// {converged, iterations, epsilon, tau, R, T, history[]}
std::string design_report_json(const DesignState &state);

}  // namespace wginv

#endif  // WGINV_DESIGN_HPP
