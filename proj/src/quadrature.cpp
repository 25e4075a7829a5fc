// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include "wginv/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wginv/error.hpp"

namespace wginv
{

GaussRule gauss_legendre(int n)
{
  if (n < 1)
  {
    fail(ErrorCode::InvalidArgument, "Gauss rule needs at least one node");
  }
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j)
      {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1)
      {
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j)
    {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1)
  {
    rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  }
  return rule;
}

namespace
{
using cd = std::complex<double>;

// Kronrod 15-point nodes (non-negative half) with the embedded 7-point Gauss rule.
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
  double a, b;
  cd value;
  double error;
};

Panel gk15(const std::function<cd(double)> &f, double a, double b)
{
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const cd fc = f(c);
  cd k = fc * wgk[7];
  cd g = fc * wg[3];
  for (int j = 0; j < 7; ++j)
  {
    const double dx = h * xgk[j];
    const cd f1 = f(c - dx), f2 = f(c + dx);
    k += wgk[j] * (f1 + f2);
    if (j % 2 == 1)
    {
      g += wg[j / 2] * (f1 + f2);
    }
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}
}  // namespace

std::complex<double> integrate_adaptive(const std::function<std::complex<double>(double)> &f,
                                        double a, double b, double tol,
                                        const std::vector<double> &breakpoints)
{
  std::vector<double> cuts{a};
  for (double p : breakpoints)
  {
    if (p > a && p < b)
    {
      cuts.push_back(p);
    }
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
  {
    if (cuts[i + 1] > cuts[i])
    {
      panels.push_back(gk15(f, cuts[i], cuts[i + 1]));
    }
  }
  for (int iter = 0; iter < 2000; ++iter)
  {
    double total_err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i)
    {
      total_err += panels[i].error;
      if (panels[i].error > panels[worst].error)
      {
        worst = i;
      }
    }
    if (total_err <= tol || panels.empty())
    {
      break;
    }
    const Panel p = panels[worst];
    const double m = 0.5 * (p.a + p.b);
    panels[worst] = gk15(f, p.a, m);
    panels.push_back(gk15(f, m, p.b));
  }
  cd sum = 0.0;
  for (const Panel &p : panels)
  {
    sum += p.value;
  }
  return sum;
}

}  // namespace wginv
