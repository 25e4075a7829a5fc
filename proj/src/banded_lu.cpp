// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <string>

#include "wginv/error.hpp"
#include "wginv/linalg.hpp"

namespace wginv
{

BandedLu::BandedLu(const SpMat &A)
{
  if (A.rows() != A.cols())
  {
    fail(ErrorCode::InvalidArgument, "matrix must be square");
  }
  n_ = static_cast<int>(A.rows());
  for (int c = 0; c < A.outerSize(); ++c)
  {
    for (SpMat::InnerIterator it(A, c); it; ++it)
    {
      kl_ = std::max(kl_, static_cast<int>(it.row()) - c);
      ku_ = std::max(ku_, c - static_cast<int>(it.row()));
    }
  }
  // Partial pivoting can push U's upper bandwidth to kl + ku.
  ld_ = 2 * kl_ + ku_ + 1;
  ab_.assign(static_cast<std::size_t>(ld_) * static_cast<std::size_t>(n_), cplx(0.0));
  for (int c = 0; c < A.outerSize(); ++c)
  {
    for (SpMat::InnerIterator it(A, c); it; ++it)
    {
      at(static_cast<int>(it.row()), c) += it.value();
    }
  }
  piv_.resize(static_cast<std::size_t>(n_));
  double umax = 0.0, umin = 1e300;
  for (int j = 0; j < n_; ++j)
  {
    const int last = std::min(n_ - 1, j + kl_);
    int p = j;
    double best = std::abs(at(j, j));
    for (int i = j + 1; i <= last; ++i)
    {
      if (std::abs(at(i, j)) > best)
      {
        best = std::abs(at(i, j));
        p = i;
      }
    }
    piv_[static_cast<std::size_t>(j)] = p;
    const int cend = std::min(n_ - 1, j + kl_ + ku_);
    if (p != j)
    {
      for (int c = j; c <= cend; ++c) std::swap(at(j, c), at(p, c));
    }
    const cplx d = at(j, j);
    umax = std::max(umax, std::abs(d));
    umin = std::min(umin, std::abs(d));
    if (std::abs(d) == 0.0)
    {
      fail(ErrorCode::SingularMatrix, "zero pivot in banded factorization");
    }
    for (int i = j + 1; i <= last; ++i)
    {
      const cplx l = at(i, j) / d;
      at(i, j) = l;
      if (l == 0.0) continue;
      for (int c = j + 1; c <= cend; ++c) at(i, c) -= l * at(j, c);
    }
  }
  rcond_ = n_ > 0 ? umin / umax : 1.0;
  if (rcond_ < kSingularPivot)
  {
    fail(ErrorCode::SingularMatrix, "pivot ratio " + std::to_string(rcond_) + " below threshold");
  }
}

CVec BandedLu::solve(const CVec &b) const
{
  CVec x = b;
  for (int j = 0; j < n_; ++j)
  {
    const int p = piv_[static_cast<std::size_t>(j)];
    if (p != j) std::swap(x(j), x(p));
    const int last = std::min(n_ - 1, j + kl_);
    for (int i = j + 1; i <= last; ++i) x(i) -= at(i, j) * x(j);
  }
  for (int j = n_ - 1; j >= 0; --j)
  {
    const int cend = std::min(n_ - 1, j + kl_ + ku_);
    cplx s = x(j);
    for (int c = j + 1; c <= cend; ++c) s -= at(j, c) * x(c);
    x(j) = s / at(j, j);
  }
  return x;
}

}  // namespace wginv
