// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/design.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

#include "wginv/error.hpp"
#include "wginv/quadrature.hpp"

namespace wginv
{

namespace
{
constexpr double pi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};
constexpr double kBasisTol = 1e-10;

void check_regime(BcKind bc, double k)
{
  const bool ok = bc == BcKind::Dirichlet ? (k > pi && k < 2.0 * pi) : (k > 0.0 && k < pi);
  if (!ok)
  {
    fail(ErrorCode::UnsupportedRegime, bc == BcKind::Dirichlet ? "Dirichlet design needs k in (pi, 2pi)"
                                                               : "Neumann design needs k in (0, pi)");
  }
}

cplx integrate_profile(const Profile &mu, const std::function<cplx(double)> &weight)
{
  const auto [lo, hi] = mu.support();
  if (lo > hi)
  {
    return 0.0;
  }
  std::vector<double> bps;
  for (double b : mu.breakpoints())
  {
    if (b > lo && b < hi) bps.push_back(b);
  }
  return integrate_adaptive([&](double x) { return mu(x) * weight(x); }, lo, hi, 1e-13, bps);
}

// (Re dR, Im dR, Im dT) of a profile.
Eigen::Vector3d first_order_map(double k, const Profile &mu)
{
  const cplx r = dR0(BcKind::Dirichlet, k, mu);
  const cplx t = dT0(BcKind::Dirichlet, k, mu);
  return {r.real(), r.imag(), t.imag()};
}

double norm(const std::vector<double> &v)
{
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void finish(DesignState &st, bool converged, const DesignOptions &options, const std::string &why)
{
  st.converged = converged;
  st.diverged = !converged;
  if (!converged)
  {
    st.note = why;
    if (options.throw_on_divergence)
    {
      fail(ErrorCode::Diverged, why);
    }
  }
}

GeometrySpec with_profile(const GeometrySpec &base, const Profile &mu, double eps)
{
  GeometrySpec g = base;
  g.profile = mu;
  g.amplitude = eps;
  return g;
}

struct Coefficients
{
  cplx R, T;
};

Coefficients solve_RT(const GeometrySpec &g, double k, const ScatteringOptions &options)
{
  const ScatteringSolution s =
      solve_scattering(g, k, IncidentWave{first_index(g.wall_bc), Side::Left}, options);
  return {s.R, s.T};
}

// Residual-feedback loop shared by the profile designs: tau <- tau - F(tau) / eps.
DesignState profile_loop(const GeometrySpec &base, const DesignBasis &basis, double eps, double eta_stop,
                         int max_iter, const DesignOptions &options, bool perfect_t)
{
  const std::size_t dim = perfect_t ? 3 : 2;
  if (basis.mu.size() < dim + 1)
  {
    fail(ErrorCode::InvalidArgument, "design basis has too few profiles");
  }
  if (!basis.all_verified())
  {
    fail(ErrorCode::InvalidArgument, "design basis failed its derivative relations");
  }
  if (base.wall_bc != basis.bc)
  {
    fail(ErrorCode::InvalidArgument, "basis and geometry use different wall conditions");
  }
  if (max_iter < 1 || !(eta_stop > 0.0))
  {
    fail(ErrorCode::InvalidArgument, "max_iter must be positive and eta_stop > 0");
  }
  DesignState st;
  st.bc = basis.bc;
  st.k = basis.k;
  st.epsilon = eps;
  st.eta_stop = eta_stop;
  st.tau.assign(dim, 0.0);
  if (eps == 0.0)
  {
    st.geometry = base;
    const Coefficients c = solve_RT(base, basis.k, options.scattering);
    st.R = c.R;
    st.T = c.T;
    st.history.push_back({st.tau, c.R, c.T});
    st.converged = true;
    return st;
  }
  for (int it = 0; it < max_iter; ++it)
  {
    st.geometry = with_profile(base, basis.combination(st.tau), eps);
    const Coefficients c = solve_RT(st.geometry, basis.k, options.scattering);
    st.R = c.R;
    st.T = c.T;
    st.iteration = it + 1;
    st.history.push_back({st.tau, c.R, c.T});
    const double res = perfect_t ? std::hypot(std::abs(c.R), c.T.imag()) : std::abs(c.R);
    if (res <= eta_stop)
    {
      if (perfect_t && c.T.real() < 0.0)
      {
        st.note = "converged on the T = -1 branch";
        fail(ErrorCode::WrongBranch, st.note);
      }
      finish(st, true, options, "");
      return st;
    }
    st.tau[0] -= c.R.real() / eps;
    st.tau[1] -= c.R.imag() / eps;
    if (perfect_t) st.tau[2] -= c.T.imag() / eps;
    if (norm(st.tau) > options.r_max)
    {
      finish(st, false, options, "|tau| exceeded r_max; retry with a smaller epsilon");
      return st;
    }
  }
  finish(st, false, options, "maximum iteration count reached");
  return st;
}

}  // namespace

cplx dR0(BcKind bc, double k, const Profile &mu)
{
  check_regime(bc, k);
  if (bc == BcKind::Dirichlet)
  {
    const double b1 = beta(bc, k, 1).real();
    return I * pi * pi / b1 * integrate_profile(mu, [&](double x) { return std::exp(2.0 * I * b1 * x); });
  }
  return I * k * integrate_profile(mu, [&](double x) { return std::exp(2.0 * I * k * x); });
}

cplx dT0(BcKind bc, double k, const Profile &mu)
{
  check_regime(bc, k);
  if (bc == BcKind::Neumann)
  {
    return 0.0;
  }
  const double b1 = beta(bc, k, 1).real();
  return I * pi * pi / b1 * integrate_profile(mu, [](double) { return cplx(1.0); });
}

bool DesignBasis::all_verified() const
{
  if (verified.size() != mu.size()) return false;
  for (bool v : verified)
  {
    if (!v) return false;
  }
  return true;
}

Profile DesignBasis::combination(const std::vector<double> &tau) const
{
  if (tau.size() + 1 > mu.size())
  {
    fail(ErrorCode::InvalidArgument, "too many design coordinates for the basis");
  }
  std::vector<std::pair<double, Profile>> terms{{1.0, mu[0]}};
  for (std::size_t j = 0; j < tau.size(); ++j)
  {
    if (tau[j] != 0.0) terms.push_back({tau[j], mu[j + 1]});
  }
  return Profile::combination(std::move(terms));
}

DesignBasis zero_r_basis(BcKind bc, double k, Mu0Kind mu0)
{
  check_regime(bc, k);
  DesignBasis b;
  b.bc = bc;
  b.k = k;
  for (int j = 0; j < 3; ++j)
  {
    b.mu.push_back(bc == BcKind::Dirichlet ? Profile::dirichlet_basis(k, j) : Profile::neumann_basis(k, j));
  }
  if (mu0 == Mu0Kind::Tent)
  {
    if (bc != BcKind::Neumann)
    {
      fail(ErrorCode::UnsupportedRegime, "tent mu_0 is defined for Neumann walls");
    }
    b.mu[0] = Profile::neumann_tent(k);
  }
  const cplx target[3] = {0.0, 1.0, I};
  for (int j = 0; j < 3; ++j)
  {
    b.verified.push_back(std::abs(dR0(bc, k, b.mu[static_cast<std::size_t>(j)]) - target[j]) < kBasisTol);
  }
  return b;
}

DesignBasis perfect_t_basis(double k)
{
  check_regime(BcKind::Dirichlet, k);
  const double b1 = beta(BcKind::Dirichlet, k, 1).real();
  const double delta = pi / b1;
  // Candidates whose images under the first-order map span R^3; mu_j is the
  // combination that inverts that 3 x 3 map.
  const std::vector<Profile> psi{Profile::dirichlet_basis(k, 1), Profile::dirichlet_basis(k, 2),
                                 Profile::cosine(1.0, 0.5 * b1, delta)};
  Eigen::Matrix3d J;
  for (int i = 0; i < 3; ++i) J.col(i) = first_order_map(k, psi[static_cast<std::size_t>(i)]);
  const Eigen::Matrix3d Jinv = J.inverse();
  DesignBasis b;
  b.bc = BcKind::Dirichlet;
  b.k = k;
  b.mu.push_back(Profile::dirichlet_basis(k, 0));
  for (int j = 0; j < 3; ++j)
  {
    std::vector<std::pair<double, Profile>> terms;
    for (int i = 0; i < 3; ++i)
    {
      if (Jinv(i, j) != 0.0) terms.push_back({Jinv(i, j), psi[static_cast<std::size_t>(i)]});
    }
    b.mu.push_back(Profile::combination(std::move(terms)));
  }
  for (int j = 0; j < 4; ++j)
  {
    Eigen::Vector3d target = Eigen::Vector3d::Zero();
    if (j > 0) target(j - 1) = 1.0;
    b.verified.push_back((first_order_map(k, b.mu[static_cast<std::size_t>(j)]) - target).cwiseAbs().maxCoeff() <
                         kBasisTol);
  }
  return b;
}

DesignState fixed_point_zero_R(const GeometrySpec &base, const DesignBasis &basis, double eps, double eta_stop,
                               int max_iter, const DesignOptions &options)
{
  return profile_loop(base, basis, eps, eta_stop, max_iter, options, false);
}

DesignState fixed_point_perfect_T(const GeometrySpec &base, const DesignBasis &basis, double eps, double eta_stop,
                                  int max_iter, const DesignOptions &options)
{
  if (basis.bc != BcKind::Dirichlet || base.wall_bc != BcKind::Dirichlet)
  {
    fail(ErrorCode::UnsupportedRegime, "dT(0) vanishes for Neumann walls; perfect transmission is not reachable");
  }
  return profile_loop(base, basis, eps, eta_stop, max_iter, options, true);
}

ChimneyPrediction chimney_predictor(const std::vector<Chimney> &chimneys, double eps_c, double k)
{
  ChimneyPrediction p;
  cplx sr = 0.0, st = 0.0;
  for (const Chimney &c : chimneys)
  {
    const double kh = k * c.height;
    const double off = std::remainder(kh - 0.5 * pi, pi);
    if (std::abs(off) < 1e-6)
    {
      fail(ErrorCode::ResonantHeight, "k h is at a resonance pi/2 + m pi; the predictor is invalid");
    }
    const double t = std::tan(kh);
    sr += std::exp(2.0 * I * k * c.x) * t;
    st += t;
  }
  // Mode products w_+(M)^2 = e^{2ikx} / (2k) and w_+ w_- = 1 / (2k) in flux normalization.
  p.R = eps_c * I * k * sr / (2.0 * k);
  p.T = 1.0 + eps_c * I * k * st / (2.0 * k);
  return p;
}

std::vector<double> resonance_lengths(double k, int m_max)
{
  if (!(k > 0.0) || m_max < 0)
  {
    fail(ErrorCode::InvalidArgument, "resonance lengths need k > 0 and m_max >= 0");
  }
  std::vector<double> out;
  for (int m = 0; m <= m_max; ++m) out.push_back(pi * (m + 0.5) / k);
  return out;
}

std::vector<Chimney> default_chimney_layout(double k, double eps_c)
{
  std::vector<Chimney> c;
  for (int n = -1; n <= 1; ++n) c.push_back({n * pi / (3.0 * k), eps_c, pi / k});
  return c;
}

DesignState chimney_tune_zero_R(const GeometrySpec &base, double eps_c, double k, double eta_stop, int max_iter,
                                const DesignOptions &options)
{
  if (base.wall_bc != BcKind::Neumann)
  {
    fail(ErrorCode::UnsupportedRegime, "chimney tuning is formulated for Neumann walls");
  }
  check_regime(BcKind::Neumann, k);
  DesignState st;
  st.bc = BcKind::Neumann;
  st.k = k;
  st.epsilon = eps_c;
  st.eta_stop = eta_stop;
  GeometrySpec g = base;
  if (g.chimneys.empty())
  {
    st.geometry = g;
    const Coefficients c = solve_RT(g, k, options.scattering);
    st.R = c.R;
    st.T = c.T;
    st.history.push_back({{}, c.R, c.T});
    st.converged = true;
    return st;
  }
  for (Chimney &c : g.chimneys) c.width = eps_c;
  for (const Chimney &c : g.chimneys) st.tau.push_back(c.height);
  const std::size_t n = g.chimneys.size();
  for (int it = 0; it < max_iter; ++it)
  {
    for (std::size_t j = 0; j < n; ++j) g.chimneys[j].height = st.tau[j];
    st.geometry = g;
    const Coefficients c = solve_RT(g, k, options.scattering);
    st.R = c.R;
    st.T = c.T;
    st.iteration = it + 1;
    st.history.push_back({st.tau, c.R, c.T});
    if (std::hypot(std::abs(c.R), c.T.imag()) <= eta_stop)
    {
      finish(st, c.T.real() > 0.0, options, "converged on the T = -1 branch");
      return st;
    }
    Eigen::MatrixXd J(3, static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
    {
      const double sec = 1.0 / std::cos(k * st.tau[j]);
      const cplx ie = I * std::exp(2.0 * I * k * g.chimneys[j].x);
      J.col(static_cast<Eigen::Index>(j)) = 0.5 * eps_c * k * sec * sec * Eigen::Vector3d(ie.real(), ie.imag(), 1.0);
    }
    const Eigen::Vector3d F(c.R.real(), c.R.imag(), c.T.imag());
    const Eigen::VectorXd dh = J.completeOrthogonalDecomposition().solve(F);
    for (std::size_t j = 0; j < n; ++j)
    {
      st.tau[j] -= dh(static_cast<Eigen::Index>(j));
      if (!(st.tau[j] > 0.0) || st.tau[j] > options.r_max)
      {
        finish(st, false, options, "chimney height left (0, r_max]");
        return st;
      }
    }
  }
  finish(st, false, options, "maximum iteration count reached");
  return st;
}

DesignState two_ligament_tune(const GeometrySpec &base, double eps_c, double k, double h1, double h2, double d,
                              double eta_stop, int max_iter, const DesignOptions &options)
{
  if (base.wall_bc != BcKind::Neumann)
  {
    fail(ErrorCode::UnsupportedRegime, "ligament tuning is formulated for Neumann walls");
  }
  check_regime(BcKind::Neumann, k);
  DesignState st;
  st.bc = BcKind::Neumann;
  st.k = k;
  st.epsilon = eps_c;
  st.eta_stop = eta_stop;
  st.note = "experimental";
  st.tau = {h1, h2, d};
  auto geometry = [&](const std::vector<double> &p) {
    GeometrySpec g = base;
    g.chimneys = {{-0.5 * p[2], eps_c, p[0]}, {0.5 * p[2], eps_c, p[1]}};
    return g;
  };
  auto residual = [&](const std::vector<double> &p, Coefficients &c) {
    c = solve_RT(geometry(p), k, options.scattering);
    return Eigen::Vector3d(c.R.real(), c.R.imag(), c.T.imag());
  };
  const double step = 1e-4;
  for (int it = 0; it < max_iter; ++it)
  {
    Coefficients c{};
    const Eigen::Vector3d F = residual(st.tau, c);
    st.geometry = geometry(st.tau);
    st.R = c.R;
    st.T = c.T;
    st.iteration = it + 1;
    st.history.push_back({st.tau, c.R, c.T});
    if (F.norm() <= eta_stop)
    {
      finish(st, c.T.real() > 0.0, options, "converged on the T = -1 branch");
      if (st.converged) st.note = "experimental";
      return st;
    }
    Eigen::Matrix3d J;
    for (int j = 0; j < 3; ++j)
    {
      std::vector<double> p = st.tau;
      p[static_cast<std::size_t>(j)] += step;
      Coefficients cj{};
      J.col(j) = (residual(p, cj) - F) / step;
    }
    const Eigen::Vector3d dp = J.fullPivLu().solve(F);
    for (int j = 0; j < 3; ++j) st.tau[static_cast<std::size_t>(j)] -= dp(j);
    if (!(st.tau[0] > 0.0 && st.tau[1] > 0.0 && st.tau[2] > eps_c) || norm(st.tau) > options.r_max)
    {
      finish(st, false, options, "ligament parameters left the admissible range");
      return st;
    }
  }
  finish(st, false, options, "maximum iteration count reached");
  return st;
}

std::string design_report_json(const DesignState &st)
{
  using nlohmann::json;
  auto c = [](cplx z) { return json::array({z.real(), z.imag()}); };
  json j;
  j["converged"] = st.converged;
  j["iterations"] = st.iteration;
  j["epsilon"] = st.epsilon;
  j["k"] = st.k;
  j["bc"] = to_string(st.bc);
  j["tau"] = st.tau;
  j["R"] = c(st.R);
  j["T"] = c(st.T);
  j["abs_R"] = std::abs(st.R);
  j["eta_stop"] = st.eta_stop;
  if (!st.note.empty()) j["note"] = st.note;
  json h = json::array();
  for (const DesignStep &s : st.history) h.push_back({{"tau", s.tau}, {"R", c(s.R)}, {"T", c(s.T)}});
  j["history"] = h;
  return j.dump(2);
}

}  // namespace wginv
