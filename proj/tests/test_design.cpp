// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

#include "wginv/design.hpp"
#include "wginv/error.hpp"
#include "wginv/quadrature.hpp"

using namespace wginv;
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

namespace
{

// Composite Gauss-Legendre over the profile's breakpoint panels, independent of the library's
// adaptive rule.
cplx integrate_panels(const Profile &mu, const std::function<cplx(double)> &w)
{
  const GaussRule g = gauss_legendre(20);
  std::vector<double> br = mu.breakpoints();
  std::sort(br.begin(), br.end());
  cplx s = 0.0;
  for (std::size_t p = 0; p + 1 < br.size(); ++p)
  {
    const int sub = 50;
    for (int j = 0; j < sub; ++j)
    {
      const double a = br[p] + (br[p + 1] - br[p]) * j / sub, b = br[p] + (br[p + 1] - br[p]) * (j + 1) / sub;
      for (std::size_t q = 0; q < g.nodes.size(); ++q)
      {
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * g.nodes[q];
        s += 0.5 * (b - a) * g.weights[q] * mu(x) * w(x);
      }
    }
  }
  return s;
}

cplx dR_oracle(BcKind bc, double k, const Profile &mu)
{
  if (bc == BcKind::Dirichlet)
  {
    const double b1 = std::sqrt(k * k - pi * pi);
    return I * pi * pi / b1 * integrate_panels(mu, [&](double x) { return std::exp(2.0 * I * b1 * x); });
  }
  return I * k * integrate_panels(mu, [&](double x) { return std::exp(2.0 * I * k * x); });
}

GeometrySpec strip(BcKind bc, double L)
{
  GeometrySpec g;
  g.wall_bc = bc;
  g.half_length = L;
  return g;
}

ScatteringOptions opts(double h)
{
  ScatteringOptions o;
  o.target_h = h;
  return o;
}

ErrorCode code_of(const std::function<void()> &f)
{
  try
  {
    f();
  }
  catch (const Error &e)
  {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoFailure;
}

}  // namespace

TEST(Design, ZeroRBasisRelations)
{
  const std::vector<cplx> target{0.0, 1.0, I};
  for (auto [bc, k] : {std::pair{BcKind::Dirichlet, 1.5 * pi}, std::pair{BcKind::Neumann, 0.8 * pi},
                       std::pair{BcKind::Dirichlet, 1.2 * pi}, std::pair{BcKind::Neumann, 0.3 * pi}})
  {
    const DesignBasis b = zero_r_basis(bc, k);
    EXPECT_TRUE(b.all_verified());
    ASSERT_EQ(b.mu.size(), 3u);
    for (int j = 0; j < 3; ++j)
    {
      EXPECT_LT(std::abs(dR0(bc, k, b.mu[j]) - target[j]), 1e-10);
      EXPECT_LT(std::abs(dR_oracle(bc, k, b.mu[j]) - target[j]), 1e-10);
    }
  }
  const DesignBasis t = zero_r_basis(BcKind::Neumann, 0.8 * pi, Mu0Kind::Tent);
  EXPECT_TRUE(t.all_verified());
  EXPECT_LT(std::abs(dR_oracle(BcKind::Neumann, 0.8 * pi, t.mu[0])), 1e-10);
  EXPECT_EQ(code_of([] { zero_r_basis(BcKind::Dirichlet, 1.5 * pi, Mu0Kind::Tent); }), ErrorCode::UnsupportedRegime);
}

// With delta = pi/k the profile -(1/pi) sin(2kx) gives ik * (-(1/pi)) * i * delta = 1 exactly.
TEST(Design, NeumannSineProfileValue)
{
  const double k = 0.8 * pi;
  const Profile mu = Profile::sine(-1.0 / pi, 2.0 * k, pi / k);
  EXPECT_LT(std::abs(dR0(BcKind::Neumann, k, mu) - 1.0), 1e-12);
}

TEST(Design, TransmissionDerivative)
{
  const double k = 1.5 * pi, b1 = std::sqrt(k * k - pi * pi);
  EXPECT_EQ(dT0(BcKind::Neumann, 0.8 * pi, Profile::tent(1.0, 0.5)), cplx(0.0));
  EXPECT_LT(std::abs(dT0(BcKind::Dirichlet, k, Profile::sine(1.0, 3.0, 1.0))), 1e-14);
  // Tent of height 0.5 and half width 0.5: area -0.25.
  const cplx v = dT0(BcKind::Dirichlet, k, Profile::tent(1.0, 0.5));
  EXPECT_NEAR(v.real(), 0.0, 1e-15);
  EXPECT_NEAR(v.imag(), pi * pi / b1 * -0.25, 1e-12);
}

TEST(Design, PerfectTBasisRelations)
{
  const double k = 1.5 * pi;
  const DesignBasis b = perfect_t_basis(k);
  EXPECT_TRUE(b.all_verified());
  ASSERT_EQ(b.mu.size(), 4u);
  for (int j = 0; j < 4; ++j)
  {
    const cplx r = dR0(BcKind::Dirichlet, k, b.mu[j]);
    const double t = dT0(BcKind::Dirichlet, k, b.mu[j]).imag();
    const Eigen::Vector3d got(r.real(), r.imag(), t);
    Eigen::Vector3d want = Eigen::Vector3d::Zero();
    if (j > 0) want(j - 1) = 1.0;
    EXPECT_LT((got - want).norm(), 1e-10) << j;
  }
}

TEST(Design, RegimeChecks)
{
  EXPECT_EQ(code_of([] { dR0(BcKind::Dirichlet, 0.5 * pi, Profile::tent(1.0, 0.2)); }), ErrorCode::UnsupportedRegime);
  EXPECT_EQ(code_of([] { dR0(BcKind::Neumann, 1.5 * pi, Profile::tent(1.0, 0.2)); }), ErrorCode::UnsupportedRegime);
  EXPECT_EQ(code_of([] { dT0(BcKind::Dirichlet, 2.5 * pi, Profile::tent(1.0, 0.2)); }), ErrorCode::UnsupportedRegime);
  const DesignBasis b = zero_r_basis(BcKind::Neumann, 0.8 * pi);
  EXPECT_EQ(code_of([&] { fixed_point_perfect_T(strip(BcKind::Neumann, 3.0), b, 0.1, 1e-4, 5); }),
            ErrorCode::UnsupportedRegime);
}

// Difference quotients at fixed mesh approach the derivative at first order in eps; the
// unperturbed reference is the discrete R_h(0).
TEST(Design, DifferenceQuotientsApproachDerivative)
{
  const double k = 1.5 * pi;
  const DesignBasis b = zero_r_basis(BcKind::Dirichlet, k);
  const Profile mu = b.mu[1];
  GeometrySpec g = strip(BcKind::Dirichlet, 2.0);
  const cplx r0 = solve_scattering(g, k, {1, Side::Left}, opts(0.025)).R;
  std::vector<double> err;
  for (double eps : {0.04, 0.02})
  {
    g.profile = mu;
    g.amplitude = eps;
    const cplx r = solve_scattering(g, k, {1, Side::Left}, opts(0.025)).R;
    err.push_back(std::abs((r - r0) / eps - 1.0));
  }
  EXPECT_LT(err[1], 0.1);
  EXPECT_GT(std::log2(err[0] / err[1]), 0.9);
}

TEST(Design, ZeroEpsilonIsTrivial)
{
  const DesignBasis b = zero_r_basis(BcKind::Dirichlet, 1.5 * pi);
  DesignOptions o;
  o.scattering.target_h = 0.05;
  const DesignState s = fixed_point_zero_R(strip(BcKind::Dirichlet, 3.0), b, 0.0, 1e-4, 10, o);
  EXPECT_TRUE(s.converged);
  for (double t : s.tau) EXPECT_EQ(t, 0.0);
  EXPECT_LT(std::abs(s.R), 1e-4);
  const DesignState p = fixed_point_perfect_T(strip(BcKind::Dirichlet, 3.0), perfect_t_basis(1.5 * pi), 0.0, 1e-4, 10, o);
  EXPECT_TRUE(p.converged);
}

TEST(Design, ZeroRScalingAndNontriviality)
{
  const double k = 1.5 * pi;
  const DesignBasis b = zero_r_basis(BcKind::Dirichlet, k);
  DesignOptions o;
  o.scattering.target_h = 0.05;
  std::vector<double> tau_norm;
  for (double eps : {0.05, 0.1})
  {
    const DesignState s = fixed_point_zero_R(strip(BcKind::Dirichlet, 3.0), b, eps, 1e-4, 50, o);
    ASSERT_TRUE(s.converged);
    EXPECT_LE(std::abs(s.R), 1e-4);
    EXPECT_NEAR(std::abs(s.T), 1.0, 1e-3);  // phase-only transmission
    EXPECT_EQ(static_cast<int>(s.history.size()), s.iteration);
    double mx = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.01) mx = std::max(mx, std::abs(s.geometry.top(x) - 1.0));
    EXPECT_GT(mx, 0.1 * eps);
    tau_norm.push_back(std::hypot(s.tau[0], s.tau[1]));
  }
  // |tau| = O(eps): doubling eps roughly doubles tau.
  EXPECT_GT(tau_norm[1] / tau_norm[0], 1.3);
  EXPECT_LT(tau_norm[1] / tau_norm[0], 3.0);
}

TEST(Design, DivergenceIsReported)
{
  const DesignBasis b = zero_r_basis(BcKind::Dirichlet, 1.5 * pi);
  DesignOptions o;
  o.scattering.target_h = 0.05;
  EXPECT_EQ(code_of([&] { fixed_point_zero_R(strip(BcKind::Dirichlet, 3.0), b, 0.2, 1e-4, 1, o); }), ErrorCode::Diverged);
  o.throw_on_divergence = false;
  const DesignState s = fixed_point_zero_R(strip(BcKind::Dirichlet, 3.0), b, 0.2, 1e-4, 1, o);
  EXPECT_FALSE(s.converged);
  EXPECT_TRUE(s.diverged);
}

TEST(Design, PerfectTransmissionSmallEpsilon)
{
  DesignOptions o;
  o.scattering.target_h = 0.05;
  const DesignState s = fixed_point_perfect_T(strip(BcKind::Dirichlet, 3.0), perfect_t_basis(1.5 * pi), 0.1, 1e-4, 30, o);
  ASSERT_TRUE(s.converged);
  EXPECT_LE(std::abs(s.R), 1e-4);
  EXPECT_LE(std::abs(s.T - 1.0), 1e-3);
}

TEST(Design, ChimneyPredictor)
{
  const double k = 0.8 * pi, ec = 0.05;
  // One chimney at x = 0 with k h = pi/4: tan = 1, e^0 = 1.
  const ChimneyPrediction p = chimney_predictor({{0.0, ec, pi / (4.0 * k)}}, ec, k);
  EXPECT_LT(std::abs(p.R - I * ec / 2.0), 1e-14);
  EXPECT_LT(std::abs(p.T - (1.0 + I * ec / 2.0)), 1e-14);
  // Heights at multiples of pi/k kill both sums.
  const ChimneyPrediction z = chimney_predictor(default_chimney_layout(k, ec), ec, k);
  EXPECT_LT(std::abs(z.R), 1e-14);
  EXPECT_LT(std::abs(z.T - 1.0), 1e-14);
  EXPECT_EQ(code_of([&] { chimney_predictor({{0.0, ec, pi / (2.0 * k)}}, ec, k); }), ErrorCode::ResonantHeight);
}

TEST(Design, ResonanceLengths)
{
  EXPECT_NEAR(resonance_lengths(pi / 2.0, 0)[0], 1.0, 1e-15);
  EXPECT_NEAR(resonance_lengths(0.8 * pi, 0)[0], 0.625, 1e-15);
  const auto l = resonance_lengths(2.0, 3);
  ASSERT_EQ(l.size(), 4u);
  for (int m = 0; m < 4; ++m) EXPECT_NEAR(std::cos(2.0 * l[m]), 0.0, 1e-14);
}

TEST(Design, ChimneyTuning)
{
  const double k = 0.8 * pi, ec = 0.05;
  DesignOptions o;
  o.scattering.target_h = 0.05;
  GeometrySpec g = strip(BcKind::Neumann, 2.0);
  const DesignState none = chimney_tune_zero_R(g, ec, k, 1e-4, 10, o);
  EXPECT_TRUE(none.converged);
  EXPECT_LT(std::abs(none.R), 1e-5);
  g.chimneys = default_chimney_layout(k, ec);
  const DesignState s = chimney_tune_zero_R(g, ec, k, 1e-4, 20, o);
  ASSERT_TRUE(s.converged);
  EXPECT_LT(std::abs(s.R), 1e-3);
  EXPECT_LT(std::abs(s.T - 1.0), 1e-2);
}

TEST(Design, ReportJson)
{
  DesignState s;
  s.epsilon = 0.2;
  s.tau = {0.1, -0.2};
  s.iteration = 1;
  s.converged = true;
  s.R = cplx(1e-5, 2e-5);
  s.T = cplx(0.0, 1.0);
  s.history.push_back({s.tau, s.R, s.T});
  const auto j = nlohmann::json::parse(design_report_json(s));
  for (const char *key : {"converged", "iterations", "epsilon", "tau", "R", "T", "history"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["iterations"], 1);
  EXPECT_EQ(j["history"].size(), 1u);
}
