// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wginv/error.hpp"
#include "wginv/modes.hpp"

namespace wginv
{

namespace
{
constexpr double pi = std::numbers::pi;
}

Profile Profile::zero() { return Profile{}; }

Profile Profile::sine(double amplitude, double frequency, double half_width, double center)
{
  if (!(half_width > 0.0))
  {
    fail(ErrorCode::GeometryInvalid, "profile half width must be positive");
  }
  Profile p;
  p.kind_ = Kind::Sine;
  p.amplitude_ = amplitude;
  p.frequency_ = frequency;
  p.half_width_ = half_width;
  p.center_ = center;
  return p;
}

Profile Profile::cosine(double amplitude, double frequency, double half_width, double center)
{
  Profile p = sine(amplitude, frequency, half_width, center);
  p.kind_ = Kind::Cosine;
  return p;
}

Profile Profile::tent(double amplitude, double half_width, double center)
{
  Profile p = sine(amplitude, 0.0, half_width, center);
  p.kind_ = Kind::Tent;
  return p;
}

Profile Profile::table(std::vector<double> xs, std::vector<double> ys)
{
  if (xs.size() != ys.size() || xs.size() < 2)
  {
    fail(ErrorCode::GeometryInvalid, "table profile needs matching x/y samples (at least 2)");
  }
  for (std::size_t i = 1; i < xs.size(); ++i)
  {
    if (!(xs[i] > xs[i - 1]))
    {
      fail(ErrorCode::GeometryInvalid, "table profile abscissae must increase strictly");
    }
  }
  if (ys.front() != 0.0 || ys.back() != 0.0)
  {
    fail(ErrorCode::GeometryInvalid, "table profile must vanish at both ends");
  }
  Profile p;
  p.kind_ = Kind::Table;
  p.xs_ = std::move(xs);
  p.ys_ = std::move(ys);
  return p;
}

Profile Profile::combination(std::vector<std::pair<double, Profile>> terms)
{
  Profile p;
  p.kind_ = Kind::Combination;
  p.terms_ = std::move(terms);
  return p;
}

Profile Profile::dirichlet_basis(double k, int j)
{
  if (!(k > pi && k < 2.0 * pi))
  {
    fail(ErrorCode::UnsupportedRegime, "Dirichlet design basis needs k in (pi, 2pi)");
  }
  const double b = beta(BcKind::Dirichlet, k, 1).real();
  const double delta = pi / b;
  switch (j)
  {
    case 0: return sine(1.0, b, delta);
    case 1: return sine(-b * b / (pi * pi * pi), 2.0 * b, delta);
    case 2: return cosine(7.0 * b * b / (12.0 * pi * pi), 1.5 * b, delta);
    default: fail(ErrorCode::BadIndex, "design basis index must be 0, 1 or 2");
  }
}

Profile Profile::neumann_basis(double k, int j)
{
  if (!(k > 0.0 && k < pi))
  {
    fail(ErrorCode::UnsupportedRegime, "Neumann design basis needs k in (0, pi)");
  }
  const double delta = pi / k;
  switch (j)
  {
    case 0: return sine(1.0, k, delta);
    case 1: return sine(-1.0 / pi, 2.0 * k, delta);
    case 2: return cosine(7.0 / 12.0, 1.5 * k, delta);
    default: fail(ErrorCode::BadIndex, "design basis index must be 0, 1 or 2");
  }
}

Profile Profile::neumann_tent(double k)
{
  if (!(k > 0.0 && k < pi))
  {
    fail(ErrorCode::UnsupportedRegime, "Neumann design basis needs k in (0, pi)");
  }
  return tent(1.0, pi / k);
}

double Profile::operator()(double x) const
{
  switch (kind_)
  {
    case Kind::Zero: return 0.0;
    case Kind::Sine:
    case Kind::Cosine:
    case Kind::Tent:
    {
      const double t = x - center_;
      if (std::abs(t) >= half_width_)
      {
        return 0.0;
      }
      if (kind_ == Kind::Sine) return amplitude_ * std::sin(frequency_ * t);
      if (kind_ == Kind::Cosine) return amplitude_ * std::cos(frequency_ * t);
      return amplitude_ * (std::abs(t) - half_width_);
    }
    case Kind::Table:
    {
      if (x <= xs_.front() || x >= xs_.back())
      {
        return 0.0;
      }
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
      const double s = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return (1.0 - s) * ys_[i - 1] + s * ys_[i];
    }
    case Kind::Combination:
    {
      double v = 0.0;
      for (const auto &[c, p] : terms_)
      {
        v += c * p(x);
      }
      return v;
    }
  }
  return 0.0;
}

bool Profile::is_zero() const
{
  switch (kind_)
  {
    case Kind::Zero: return true;
    case Kind::Sine:
    case Kind::Cosine:
    case Kind::Tent: return amplitude_ == 0.0;
    case Kind::Table:
      return std::all_of(ys_.begin(), ys_.end(), [](double y) { return y == 0.0; });
    case Kind::Combination:
      return std::all_of(terms_.begin(), terms_.end(),
                         [](const auto &t) { return t.first == 0.0 || t.second.is_zero(); });
  }
  return true;
}

std::pair<double, double> Profile::support() const
{
  if (is_zero())
  {
    return {1.0, -1.0};
  }
  switch (kind_)
  {
    case Kind::Sine:
    case Kind::Cosine:
    case Kind::Tent: return {center_ - half_width_, center_ + half_width_};
    case Kind::Table: return {xs_.front(), xs_.back()};
    case Kind::Combination:
    {
      double lo = 1e300, hi = -1e300;
      for (const auto &[c, p] : terms_)
      {
        if (c == 0.0 || p.is_zero()) continue;
        const auto s = p.support();
        lo = std::min(lo, s.first);
        hi = std::max(hi, s.second);
      }
      return {lo, hi};
    }
    default: return {1.0, -1.0};
  }
}

std::vector<double> Profile::breakpoints() const
{
  std::vector<double> out;
  if (is_zero())
  {
    return out;
  }
  switch (kind_)
  {
    case Kind::Sine:
    case Kind::Cosine:
      out = {center_ - half_width_, center_ + half_width_};
      break;
    case Kind::Tent:
      out = {center_ - half_width_, center_, center_ + half_width_};
      break;
    case Kind::Table:
      out = xs_;
      break;
    case Kind::Combination:
      for (const auto &[c, p] : terms_)
      {
        if (c == 0.0) continue;
        const auto b = p.breakpoints();
        out.insert(out.end(), b.begin(), b.end());
      }
      break;
    default: break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Profile::is_even() const
{
  switch (kind_)
  {
    case Kind::Zero: return true;
    case Kind::Sine: return amplitude_ == 0.0;
    case Kind::Cosine:
    case Kind::Tent: return center_ == 0.0 || amplitude_ == 0.0;
    case Kind::Table:
    {
      const std::size_t n = xs_.size();
      for (std::size_t i = 0; i < n; ++i)
      {
        if (xs_[i] != -xs_[n - 1 - i] || ys_[i] != ys_[n - 1 - i]) return false;
      }
      return true;
    }
    case Kind::Combination:
      return std::all_of(terms_.begin(), terms_.end(),
                         [](const auto &t) { return t.first == 0.0 || t.second.is_even(); });
  }
  return false;
}

Profile Profile::scaled(double s) const
{
  if (kind_ == Kind::Zero)
  {
    return *this;
  }
  return combination({{s, *this}});
}

}  // namespace wginv
