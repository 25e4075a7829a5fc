// Copyright (c) wginv contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef WGINV_LINALG_HPP
#define WGINV_LINALG_HPP

#include <memory>
#include <vector>

#include "wginv/fem.hpp"

namespace wginv
{

// Factorization interface shared by the direct solver and the eigensolver.
class Factorization
{
public:
  virtual ~Factorization() = default;
  virtual CVec solve(const CVec &b) const = 0;
  // min |u_ii| / max |u_ii| over the pivots of U.
  virtual double pivot_ratio() const = 0;
};

// Multifrontal sparse LU (UMFPACK). Throws FactorizationFailure or SingularMatrix.
class SparseLu final : public Factorization
{
public:
  explicit SparseLu(const SpMat &A);
  ~SparseLu() override;
  SparseLu(const SparseLu &) = delete;
  SparseLu &operator=(const SparseLu &) = delete;
  CVec solve(const CVec &b) const override;
  double pivot_ratio() const override { return rcond_; }

private:
  std::vector<int> Ap_, Ai_;
  std::vector<double> Ax_;
  int n_ = 0;
  void *numeric_ = nullptr;
  double rcond_ = 0.0;
};

// Banded LU with row partial pivoting restricted to the band.
class BandedLu final : public Factorization
{
public:
  explicit BandedLu(const SpMat &A);
  CVec solve(const CVec &b) const override;
  double pivot_ratio() const override { return rcond_; }
  int lower_bandwidth() const { return kl_; }
  int upper_bandwidth() const { return ku_; }

private:
  int n_ = 0, kl_ = 0, ku_ = 0, ld_ = 0;
  std::vector<cplx> ab_;  // column-major band storage with kl extra rows for fill
  std::vector<int> piv_;
  double rcond_ = 0.0;
  cplx &at(int i, int j) { return ab_[static_cast<std::size_t>(j) * static_cast<std::size_t>(ld_) + static_cast<std::size_t>(kl_ + ku_ + i - j)]; }
  const cplx &at(int i, int j) const { return ab_[static_cast<std::size_t>(j) * static_cast<std::size_t>(ld_) + static_cast<std::size_t>(kl_ + ku_ + i - j)]; }
};

std::unique_ptr<Factorization> factorize(const SpMat &A, SolverBackend backend);

// Solve with an existing factorization plus up to three refinement steps.
// Throws SingularMatrix when the relative residual stays above 1e-10.
CVec solve_factored(const Factorization &lu, const SpMat &A, const CVec &b, SolveInfo *info = nullptr);

struct EigenPair
{
  cplx lambda;
  CVec vector;      // unit Euclidean norm
  double residual;  // ||K u - lambda M u|| / ||K u||
};

struct ArnoldiOptions
{
  double tol = 1e-8;
  int subspace_factor = 4;
  int max_restarts = 30;
  unsigned seed = 20240611u;
  bool accept_partial = false;  // return converged pairs instead of throwing NoConvergence
  SolverBackend backend = SolverBackend::SparseLu;
};

struct ArnoldiStats
{
  int restarts = 0;
  int converged = 0;
  cplx shift_used;
};

// Eigenpairs of K u = lambda M u nearest sigma via implicitly restarted Arnoldi
// on (K - sigma M)^-1 M. Retries once with sigma + 1e-6 i if the factorization fails.
std::vector<EigenPair> eig_shift_invert(const SpMat &K, const SpMat &M, cplx sigma, int count,
                                        const ArnoldiOptions &options = {}, ArnoldiStats *stats = nullptr);

}  // namespace wginv

#endif  // WGINV_LINALG_HPP
