// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "wginv/error.hpp"
#include "wginv/linalg.hpp"

namespace wginv
{

namespace
{
using CMat = Eigen::MatrixXcd;

struct Ritz
{
  cplx nu;
  Eigen::VectorXcd y;
};

// Ritz pairs of the leading m x m block, largest |nu| first.
std::vector<Ritz> ritz_pairs(const CMat &H, int m)
{
  Eigen::ComplexEigenSolver<CMat> es(H.topLeftCorner(m, m), true);
  std::vector<Ritz> out;
  for (int i = 0; i < m; ++i)
  {
    out.push_back({es.eigenvalues()(i), es.eigenvectors().col(i).normalized()});
  }
  std::stable_sort(out.begin(), out.end(), [](const Ritz &a, const Ritz &b) { return std::abs(a.nu) > std::abs(b.nu); });
  return out;
}

class ShiftInvertOp
{
public:
  ShiftInvertOp(const SpMat &K, const SpMat &M, cplx sigma, SolverBackend backend)
    : M_(M)
  {
    SpMat A = K - sigma * M;
    A.makeCompressed();
    lu_ = factorize(A, backend);
  }
  CVec apply(const CVec &x) const { return lu_->solve(M_ * x); }

private:
  const SpMat &M_;
  std::unique_ptr<Factorization> lu_;
};

std::vector<EigenPair> run_arnoldi(const SpMat &K, const SpMat &M, cplx sigma, int count,
                                   const ArnoldiOptions &opt, ArnoldiStats *stats)
{
  const int n = static_cast<int>(K.rows());
  const ShiftInvertOp op(K, M, sigma, opt.backend);
  const int m = std::min(n, std::max(count + 2, opt.subspace_factor * count));
  const int keep = std::min(m - 1, count + (m - count) / 2);

  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec v0(n);
  for (int i = 0; i < n; ++i) v0(i) = cplx(nd(rng), nd(rng));
  v0 = op.apply(v0);
  v0.normalize();

  CMat V = CMat::Zero(n, m + 1);
  CMat H = CMat::Zero(m + 1, m);
  V.col(0) = v0;

  auto extend = [&](int from) {
    for (int j = from; j < m; ++j)
    {
      CVec w = op.apply(V.col(j));
      Eigen::VectorXcd h = V.leftCols(j + 1).adjoint() * w;
      w -= V.leftCols(j + 1) * h;
      const Eigen::VectorXcd h2 = V.leftCols(j + 1).adjoint() * w;
      w -= V.leftCols(j + 1) * h2;
      h += h2;
      double beta = w.norm();
      H.block(0, j, j + 1, 1) = h;
      if (beta < 1e-14 * h.norm())
      {
        // Invariant subspace: continue with a fresh orthogonal direction.
        for (int i = 0; i < n; ++i) w(i) = cplx(nd(rng), nd(rng));
        for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(j + 1) * (V.leftCols(j + 1).adjoint() * w);
        w.normalize();
        beta = 0.0;
        V.col(j + 1) = w;
      }
      else
      {
        V.col(j + 1) = w / beta;
      }
      H(j + 1, j) = beta;
    }
  };

  extend(0);
  std::vector<EigenPair> result;
  int restart = 0;
  for (;; ++restart)
  {
    const std::vector<Ritz> rp = ritz_pairs(H, m);
    result.clear();
    int converged = 0;
    for (int i = 0; i < count && i < m; ++i)
    {
      const double est = std::abs(H(m, m - 1)) * std::abs(rp[static_cast<std::size_t>(i)].y(m - 1));
      if (est > opt.tol * std::abs(rp[static_cast<std::size_t>(i)].nu)) continue;
      CVec x = V.leftCols(m) * rp[static_cast<std::size_t>(i)].y;
      x.normalize();
      const cplx lambda = sigma + 1.0 / rp[static_cast<std::size_t>(i)].nu;
      const CVec kx = K * x;
      const double res = (kx - lambda * (M * x)).norm() / std::max(kx.norm(), 1e-300);
      if (res <= opt.tol || est <= 1e-3 * opt.tol * std::abs(rp[static_cast<std::size_t>(i)].nu))
      {
        result.push_back({lambda, x, res});
        ++converged;
      }
    }
    if (converged >= std::min(count, m) || restart >= opt.max_restarts)
    {
      if (stats)
      {
        stats->restarts = restart;
        stats->converged = converged;
        stats->shift_used = sigma;
      }
      if (converged < std::min(count, m) && !opt.accept_partial)
      {
        fail(ErrorCode::NoConvergence, "Arnoldi: " + std::to_string(converged) + " of " + std::to_string(count) +
                                           " eigenpairs converged after " + std::to_string(restart) + " restarts");
      }
      break;
    }
    // Implicit restart with the unwanted Ritz values as exact shifts.
    CMat Hm = H.topLeftCorner(m, m);
    CMat Q = CMat::Identity(m, m);
    for (int s = keep; s < m; ++s)
    {
      const cplx mu = rp[static_cast<std::size_t>(s)].nu;
      Eigen::HouseholderQR<CMat> qr(Hm - mu * CMat::Identity(m, m));
      const CMat Qi = qr.householderQ();
      Hm = Qi.adjoint() * Hm * Qi;
      Q = Q * Qi;
    }
    for (int c = 0; c < m; ++c)
    {
      for (int r = c + 2; r < m; ++r) Hm(r, c) = 0.0;
    }
    const CVec fm = V.col(m) * H(m, m - 1);
    const CVec fk = V.leftCols(m) * Q.col(keep) * Hm(keep, keep - 1) + fm * Q(m - 1, keep - 1);
    const CMat Vk = V.leftCols(m) * Q.leftCols(keep);
    V.setZero();
    V.leftCols(keep) = Vk;
    H.setZero();
    H.topLeftCorner(keep, keep) = Hm.topLeftCorner(keep, keep);
    const double bk = fk.norm();
    H(keep, keep - 1) = bk;
    if (bk > 0.0)
    {
      V.col(keep) = fk / bk;
    }
    else
    {
      CVec w(n);
      for (int i = 0; i < n; ++i) w(i) = cplx(nd(rng), nd(rng));
      for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(keep) * (V.leftCols(keep).adjoint() * w);
      V.col(keep) = w.normalized();
    }
    extend(keep);
  }
  std::stable_sort(result.begin(), result.end(), [&](const EigenPair &a, const EigenPair &b) {
    return std::abs(a.lambda - sigma) < std::abs(b.lambda - sigma);
  });
  return result;
}
}  // namespace

std::vector<EigenPair> eig_shift_invert(const SpMat &K, const SpMat &M, cplx sigma, int count,
                                        const ArnoldiOptions &options, ArnoldiStats *stats)
{
  if (count < 1 || K.rows() != K.cols() || M.rows() != K.rows())
  {
    fail(ErrorCode::InvalidArgument, "eigensolver needs square matrices of equal size and count >= 1");
  }
  try
  {
    return run_arnoldi(K, M, sigma, count, options, stats);
  }
  catch (const Error &e)
  {
    if (e.code() != ErrorCode::SingularMatrix && e.code() != ErrorCode::FactorizationFailure)
    {
      throw;
    }
  }
  return run_arnoldi(K, M, sigma + cplx(0.0, 1e-6), count, options, stats);
}

}  // namespace wginv
