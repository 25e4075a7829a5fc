// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_PROFILE_HPP
#define WGINV_PROFILE_HPP

#include <string>
#include <utility>
#include <vector>

namespace wginv
{

// Compactly supported wall profile mu(x). The top wall is y = 1 + eps * mu(x).
class Profile
{
public:
  enum class Kind
  {
    Zero,
    Sine,         // amplitude * sin(frequency * (x - center)) on |x - center| < half_width
    Cosine,       // amplitude * cos(frequency * (x - center)) on |x - center| < half_width
    Tent,         // amplitude * (|x - center| - half_width) on |x - center| < half_width
    Table,        // piecewise linear through samples, zero outside
    Combination   // sum of coef * profile
  };

  Profile() = default;

  static Profile zero();
  static Profile sine(double amplitude, double frequency, double half_width, double center = 0.0);
  static Profile cosine(double amplitude, double frequency, double half_width, double center = 0.0);
  static Profile tent(double amplitude, double half_width, double center = 0.0);
  static Profile table(std::vector<double> xs, std::vector<double> ys);
  static Profile combination(std::vector<std::pair<double, Profile>> terms);

  // mu_j, j in {0,1,2}, for Dirichlet walls: support (-pi/beta_1, pi/beta_1).
  static Profile dirichlet_basis(double k, int j);
  // mu_j, j in {0,1,2}, for Neumann walls: support (-pi/k, pi/k).
  static Profile neumann_basis(double k, int j);
  // mu_0 = |x| - delta with delta = pi/k.
  static Profile neumann_tent(double k);

  Kind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double frequency() const { return frequency_; }
  double half_width() const { return half_width_; }
  double center() const { return center_; }
  const std::vector<double> &xs() const { return xs_; }
  const std::vector<double> &ys() const { return ys_; }
  const std::vector<std::pair<double, Profile>> &terms() const { return terms_; }

  double operator()(double x) const;

  bool is_zero() const;
  // Closed support [lo, hi]; empty (lo > hi) for the zero profile.
  std::pair<double, double> support() const;
  // Points where mu may fail to be smooth, including the support ends.
  std::vector<double> breakpoints() const;
  // True when mu(-x) = mu(x) holds exactly by construction.
  bool is_even() const;

  // Same profile scaled by s.
  Profile scaled(double s) const;

private:
  Kind kind_ = Kind::Zero;
  double amplitude_ = 0.0;
  double frequency_ = 0.0;
  double half_width_ = 0.0;
  double center_ = 0.0;
  std::vector<double> xs_, ys_;
  std::vector<std::pair<double, Profile>> terms_;
};

}  // namespace wginv

#endif  // WGINV_PROFILE_HPP
