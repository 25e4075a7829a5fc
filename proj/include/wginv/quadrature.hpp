// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_QUADRATURE_HPP
#define WGINV_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace wginv
{

struct GaussRule
{
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

// Adaptive Gauss-Kronrod (7/15) on [a, b]. Interior breakpoints are honoured as
// panel boundaries so kinks of the integrand do not slow convergence.
std::complex<double> integrate_adaptive(const std::function<std::complex<double>(double)> &f,
                                        double a, double b, double tol,
                                        const std::vector<double> &breakpoints = {});

}  // namespace wginv

#endif  // WGINV_QUADRATURE_HPP
