#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <memory>
#include <vector>

#include "semlab/types.hpp"

namespace semlab {

/// Compressed-row sparse matrix used for the low-order operator and the
/// multigrid coarse systems.
using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct AmgOptions {
  double strength_threshold = 0.25;  // aggregation strength cutoff
  double jacobi_damping = 0.9;
  int pre_sweeps = 1;
  int post_sweeps = 1;
  int max_levels = 25;
  int max_coarse_size = 200;
  bool coarse_direct = true;  // dense factorization; otherwise damped-Jacobi sweeps
  int coarse_sweeps = 8;
};

/// Aggregation-based algebraic multigrid. Setup builds piecewise-constant
/// aggregates from the strength graph |a_ij| > theta*sqrt(a_ii*a_jj) with
/// Galerkin coarse operators; each preconditioner application runs a single
/// V-cycle with damped-Jacobi relaxation. Fully deterministic: aggregation is
/// a greedy pass in ascending row order.
class AmgHierarchy {
 public:
  static AmgHierarchy build(const CsrMatrix& A, const AmgOptions& opts = {});

  /// z = one V-cycle applied to r (zero initial guess). A fixed linear map.
  void vcycle(const FieldVector& r, FieldVector& z) const;

  int n_levels() const { return int(levels_.size()); }
  Index level_size(int l) const { return levels_[size_t(l)].A.rows(); }
  const CsrMatrix& level_matrix(int l) const { return levels_[size_t(l)].A; }
  /// Aggregate id of each fine dof on one level (interpolation columns
  /// partition the fine dofs).
  const std::vector<int>& aggregates(int l) const { return levels_[size_t(l)].aggregate_of; }
  const AmgOptions& options() const { return opts_; }

 private:
  struct Level {
    CsrMatrix A;
    FieldVector inv_diag;
    CsrMatrix P;  // to this level from the next coarser one
    std::vector<int> aggregate_of;
  };

  void cycle(int l, const FieldVector& r, FieldVector& z) const;
  void relax(const Level& lvl, const FieldVector& b, FieldVector& x, int sweeps) const;

  AmgOptions opts_;
  std::vector<Level> levels_;
  Eigen::LDLT<Eigen::MatrixXd> coarse_solver_;
  Eigen::MatrixXd coarse_dense_;
};

}  // namespace semlab
