#pragma once

#include <vector>

#include "semlab/types.hpp"

namespace semlab {

struct GmresConfig {
  int restart = 20;
  double tol = 1e-8;       // relative to the initial residual norm
  int max_iters = 500;
  bool use_abs_tol = false;
  double abs_tol = 0.0;    // used instead of tol when use_abs_tol is set
};

struct GmresStats {
  int iterations = 0;
  bool converged = false;
  bool breakdown = false;        // lucky Arnoldi breakdown
  double initial_residual = 0.0; // unpreconditioned 2-norm at entry
  double abs_residual = 0.0;     // recomputed true residual at exit
  double rel_residual = 0.0;
  std::vector<double> history;   // least-squares residual estimates per iteration
};

/// Restarted GMRES with right preconditioning. M must be a fixed linear
/// operator (pass nullptr for the identity); the convergence test uses the
/// true unpreconditioned residual. Arnoldi uses classical Gram-Schmidt with
/// one re-orthogonalization pass; a lucky breakdown is treated as convergence
/// of the subspace.
GmresStats gmres_solve(const LinOp& A, const LinOp& M, const FieldVector& b,
                       FieldVector& x, const GmresConfig& config);

/// A-conjugate projection of initial guesses onto prior solutions. Basis
/// vectors satisfy x_i^T A x_j = delta_ij; the projected guess for a new
/// right-hand side is sum_i (x_i^T b) x_i, so the residual b - A u is
/// orthogonal to the basis span.
class ProjectionBasis {
 public:
  explicit ProjectionBasis(int capacity = 10) : capacity_(capacity) {}

  FieldVector initial_guess(const FieldVector& b) const;

  /// A-orthonormalize a converged solution into the basis (one
  /// re-orthogonalization pass), evicting the oldest vector beyond capacity.
  /// Insertion is skipped when the A-norm after orthogonalization is
  /// negligible.
  void insert(const FieldVector& x, const LinOp& A);

  int size() const { return int(basis_.size()); }
  int capacity() const { return capacity_; }
  const std::vector<FieldVector>& vectors() const { return basis_; }
  void clear() { basis_.clear(); }

 private:
  int capacity_;
  std::vector<FieldVector> basis_;
};

}  // namespace semlab
