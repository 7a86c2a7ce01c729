#pragma once

#include <cstdint>

#include "semlab/types.hpp"

namespace semlab {

struct ChebyParams {
  int order = 2;                 // eta >= 1
  double lambda_min_mult = 0.1;  // bounds as multiples of lambda_max_est
  double lambda_max_mult = 1.1;
  double lambda_max_est = 0.0;   // largest-eigenvalue estimate for S*A
};

struct LambdaEstimate {
  double value = 0.0;
  bool breakdown = false;  // subspace became invariant before all rounds ran
  int rounds_used = 0;
};

/// Largest-Ritz-value estimate of the smoothed operator S*A from a fixed
/// number of Arnoldi rounds started at a seeded random vector. Breakdown
/// returns the best estimate so far with the flag set.
LambdaEstimate estimate_lambda_max(const LinOp& smoother, const LinOp& op,
                                   Index n, int rounds = 10,
                                   std::uint64_t seed = 0);

/// Chebyshev acceleration of a surrogate smoother S for A on the eigenvalue
/// band [lambda_min_mult, lambda_max_mult] * lambda_max_est. One smooth() of
/// order eta applies S and A eta+1 times each and adds the accelerated
/// correction to x (a nonzero starting x is allowed; a zero residual leaves
/// x unchanged).
class ChebyshevSmoother {
 public:
  ChebyshevSmoother(LinOp smoother, LinOp op, const ChebyParams& params);

  void smooth(const FieldVector& b, FieldVector& x) const;
  const ChebyParams& params() const { return params_; }

 private:
  LinOp smoother_;
  LinOp op_;
  ChebyParams params_;
  double theta_, delta_, sigma_;
};

}  // namespace semlab
