#include "semlab/chebyshev.hpp"

#include <Eigen/Dense>
#include <random>
#include <stdexcept>

namespace semlab {

LambdaEstimate estimate_lambda_max(const LinOp& smoother, const LinOp& op,
                                   Index n, int rounds, std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("estimate_lambda_max: rounds >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  FieldVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);

  LambdaEstimate est;
  Eigen::MatrixXd V(n, rounds + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(rounds + 1, rounds);
  FieldVector w(n), t(n);

  // Mask-consistent start: one application of S*A confines the vector to the
  // operators' range before normalizing.
  op(v, t);
  smoother(t, w);
  double nrm = w.norm();
  if (!(nrm > 0.0)) {
    est.breakdown = true;
    return est;
  }
  V.col(0) = w / nrm;

  int m = 0;
  for (int j = 0; j < rounds; ++j) {
    op(V.col(j), t);
    smoother(t, w);
    Eigen::VectorXd h = V.leftCols(j + 1).transpose() * w;
    w.noalias() -= V.leftCols(j + 1) * h;
    Eigen::VectorXd h2 = V.leftCols(j + 1).transpose() * w;
    w.noalias() -= V.leftCols(j + 1) * h2;
    h += h2;
    H.col(j).head(j + 1) = h;
    const double hnext = w.norm();
    H(j + 1, j) = hnext;
    m = j + 1;
    if (hnext <= 1e-12 * h.cwiseAbs().maxCoeff()) {
      est.breakdown = true;
      break;
    }
    V.col(j + 1) = w / hnext;
  }
  est.rounds_used = m;
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(H.topLeftCorner(m, m));
  est.value = eig.eigenvalues().cwiseAbs().maxCoeff();
  return est;
}

ChebyshevSmoother::ChebyshevSmoother(LinOp smoother, LinOp op,
                                     const ChebyParams& params)
    : smoother_(std::move(smoother)), op_(std::move(op)), params_(params) {
  if (params_.order < 1)
    throw std::invalid_argument("ChebyshevSmoother: order must be >= 1");
  if (!(params_.lambda_min_mult > 0.0) ||
      !(params_.lambda_max_mult > params_.lambda_min_mult))
    throw std::invalid_argument(
        "ChebyshevSmoother: need 0 < lambda_min_mult < lambda_max_mult");
  if (!(params_.lambda_max_est > 0.0))
    throw std::invalid_argument("ChebyshevSmoother: lambda_max_est not set");
  const double lmin = params_.lambda_min_mult * params_.lambda_max_est;
  const double lmax = params_.lambda_max_mult * params_.lambda_max_est;
  theta_ = 0.5 * (lmax + lmin);
  delta_ = 0.5 * (lmax - lmin);
  sigma_ = theta_ / delta_;
}

void ChebyshevSmoother::smooth(const FieldVector& b, FieldVector& x) const {
  const Index n = b.size();
  FieldVector r(n), t(n), sad(n);

  op_(x, t);
  t = b - t;
  smoother_(t, r);

  FieldVector d = r / theta_;
  double rho = 1.0 / sigma_;
  for (int k = 1; k <= params_.order; ++k) {
    x += d;
    op_(d, t);
    smoother_(t, sad);
    r -= sad;
    const double rho_next = 1.0 / (2.0 * sigma_ - rho);
    d = rho_next * rho * d + (2.0 * rho_next / delta_) * r;
    rho = rho_next;
  }
  x += d;
}

}  // namespace semlab
