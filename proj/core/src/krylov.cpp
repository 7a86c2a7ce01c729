#include "semlab/krylov.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace semlab {

namespace {

void apply_or_copy(const LinOp& op, const FieldVector& in, FieldVector& out) {
  if (op)
    op(in, out);
  else
    out = in;
}

}  // namespace

GmresStats gmres_solve(const LinOp& A, const LinOp& M, const FieldVector& b,
                       FieldVector& x, const GmresConfig& config) {
  if (config.restart < 1) throw std::invalid_argument("gmres: restart must be >= 1");
  if (!(config.tol > 0.0)) throw std::invalid_argument("gmres: tol must be positive");
  if (!A) throw std::invalid_argument("gmres: missing operator");

  const Index n = b.size();
  const int m = config.restart;
  GmresStats stats;

  FieldVector r(n), w(n), z(n);
  A(x, r);
  r = b - r;
  stats.initial_residual = r.norm();
  const double target = config.use_abs_tol
                            ? config.abs_tol
                            : config.tol * stats.initial_residual;

  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd g(m + 1), cs(m), sn(m);

  const auto finish = [&](double res) {
    stats.abs_residual = res;
    stats.rel_residual = stats.initial_residual > 0.0
                             ? res / stats.initial_residual
                             : 0.0;
  };

  double beta = stats.initial_residual;
  if (beta <= target) {
    stats.converged = true;
    finish(beta);
    return stats;
  }

  while (stats.iterations < config.max_iters) {
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    int j = 0;
    bool lucky = false;

    for (; j < m && stats.iterations < config.max_iters; ++j) {
      apply_or_copy(M, V.col(j), z);
      A(z, w);

      // classical Gram-Schmidt with one re-orthogonalization pass
      Eigen::VectorXd h = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * h;
      Eigen::VectorXd h2 = V.leftCols(j + 1).transpose() * w;
      w.noalias() -= V.leftCols(j + 1) * h2;
      h += h2;
      H.col(j).head(j + 1) = h;
      const double hnext = w.norm();
      H(j + 1, j) = hnext;

      // Givens update of the QR factorization of H
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      const double denom = std::hypot(H(j, j), H(j + 1, j));
      cs[j] = denom > 0.0 ? H(j, j) / denom : 1.0;
      sn[j] = denom > 0.0 ? H(j + 1, j) / denom : 0.0;
      H(j, j) = denom;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] *= cs[j];

      ++stats.iterations;
      const double res_est = std::abs(g[j + 1]);
      stats.history.push_back(res_est);

      if (hnext <= 1e-14 * beta) {  // lucky breakdown: subspace is invariant
        stats.breakdown = true;
        lucky = true;
        ++j;
        break;
      }
      V.col(j + 1) = w / hnext;
      if (res_est <= target) {
        ++j;
        break;
      }
    }

    if (j > 0) {
      const Eigen::VectorXd y =
          H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
      const FieldVector correction = V.leftCols(j) * y;
      apply_or_copy(M, correction, z);  // right preconditioning: x += M V y
      x += z;
    }

    A(x, r);
    r = b - r;
    beta = r.norm();
    if (beta <= target || lucky) {
      stats.converged = true;
      finish(beta);
      return stats;
    }
  }

  finish(beta);
  stats.converged = beta <= target;
  return stats;
}

FieldVector ProjectionBasis::initial_guess(const FieldVector& b) const {
  if (basis_.empty()) return FieldVector::Zero(b.size());
  FieldVector u = FieldVector::Zero(b.size());
  for (const auto& v : basis_) u += v.dot(b) * v;
  return u;
}

void ProjectionBasis::insert(const FieldVector& x, const LinOp& A) {
  if (!A) throw std::invalid_argument("ProjectionBasis: missing operator");
  FieldVector w = x;
  FieldVector aw(x.size());
  A(w, aw);
  const double norm0 = std::sqrt(std::max(0.0, w.dot(aw)));
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& v : basis_) w -= v.dot(aw) * v;
    A(w, aw);
  }
  const double norm = std::sqrt(std::max(0.0, w.dot(aw)));
  if (!(norm > 1e-12 * std::max(norm0, 1e-300))) return;  // numerically dependent
  basis_.push_back(w / norm);
  if (int(basis_.size()) > capacity_) basis_.erase(basis_.begin());
}

}  // namespace semlab
