#include "semlab/amg.hpp"

#include <cmath>
#include <stdexcept>

namespace semlab {

namespace {

// Greedy pairwise-style aggregation over the strength graph (ascending row
// order, two passes plus singleton cleanup).
std::vector<int> aggregate(const CsrMatrix& A, double theta, int& n_agg) {
  const Index n = A.rows();

  // classical strength: |a_ij| >= theta * max_{k != i} |a_ik|
  std::vector<std::vector<Index>> strong(size_t(n));
  for (Index i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (CsrMatrix::InnerIterator it(A, i); it; ++it)
      if (it.col() != i) row_max = std::max(row_max, std::abs(it.value()));
    if (row_max == 0.0) continue;  // decoupled row (e.g. Dirichlet identity)
    const double cutoff = theta * row_max;
    for (CsrMatrix::InnerIterator it(A, i); it; ++it) {
      const Index j = it.col();
      if (j != i && std::abs(it.value()) >= cutoff)
        strong[size_t(i)].push_back(j);
    }
  }

  std::vector<int> agg(size_t(n), -1);
  n_agg = 0;
  // pass 1: seed aggregates from rows whose strong neighborhood is untouched
  for (Index i = 0; i < n; ++i) {
    if (agg[size_t(i)] >= 0) continue;
    bool clean = true;
    for (Index j : strong[size_t(i)])
      if (agg[size_t(j)] >= 0) {
        clean = false;
        break;
      }
    if (!clean || strong[size_t(i)].empty()) continue;
    agg[size_t(i)] = n_agg;
    for (Index j : strong[size_t(i)]) agg[size_t(j)] = n_agg;
    ++n_agg;
  }
  // pass 2: attach leftovers to the strongest aggregated neighbor
  for (Index i = 0; i < n; ++i) {
    if (agg[size_t(i)] >= 0) continue;
    double best = 0.0;
    int best_agg = -1;
    for (Index j : strong[size_t(i)]) {
      if (agg[size_t(j)] < 0) continue;
      const double w = std::abs(A.coeff(i, j));
      if (w > best) {
        best = w;
        best_agg = agg[size_t(j)];
      }
    }
    if (best_agg >= 0) agg[size_t(i)] = best_agg;
  }
  // pass 3: whatever is left becomes a singleton
  for (Index i = 0; i < n; ++i)
    if (agg[size_t(i)] < 0) agg[size_t(i)] = n_agg++;
  return agg;
}

}  // namespace

AmgHierarchy AmgHierarchy::build(const CsrMatrix& A, const AmgOptions& opts) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("AmgHierarchy: matrix must be square");
  AmgHierarchy h;
  h.opts_ = opts;

  CsrMatrix current = A;
  while (int(h.levels_.size()) < opts.max_levels - 1 &&
         current.rows() > opts.max_coarse_size) {
    Level lvl;
    lvl.A = current;
    lvl.inv_diag.resize(current.rows());
    for (Index i = 0; i < current.rows(); ++i) {
      const double d = current.coeff(i, i);
      if (d == 0.0)
        throw std::runtime_error("AmgHierarchy: zero diagonal at row " +
                                 std::to_string(i));
      lvl.inv_diag[i] = 1.0 / d;
    }

    int n_agg = 0;
    lvl.aggregate_of = aggregate(current, opts.strength_threshold, n_agg);
    if (n_agg >= current.rows()) {
      // no coarsening possible (e.g. a diagonal matrix): stop here
      h.levels_.push_back(std::move(lvl));
      h.levels_.back().P.resize(current.rows(), 0);
      break;
    }

    lvl.P.resize(current.rows(), n_agg);
    {
      std::vector<Eigen::Triplet<double>> trip;
      trip.reserve(size_t(current.rows()));
      for (Index i = 0; i < current.rows(); ++i)
        trip.emplace_back(i, lvl.aggregate_of[size_t(i)], 1.0);
      lvl.P.setFromTriplets(trip.begin(), trip.end());
    }

    const CsrMatrix PT = CsrMatrix(lvl.P.transpose());
    CsrMatrix coarse = PT * lvl.A * lvl.P;
    coarse.makeCompressed();
    h.levels_.push_back(std::move(lvl));
    current = std::move(coarse);
  }

  if (h.levels_.empty() || h.levels_.back().P.cols() != 0) {
    Level lvl;
    lvl.A = current;
    lvl.inv_diag.resize(current.rows());
    for (Index i = 0; i < current.rows(); ++i)
      lvl.inv_diag[i] = 1.0 / current.coeff(i, i);
    lvl.P.resize(current.rows(), 0);
    h.levels_.push_back(std::move(lvl));
  }

  h.coarse_dense_ = Eigen::MatrixXd(h.levels_.back().A);
  h.coarse_solver_.compute(h.coarse_dense_);
  if (h.coarse_solver_.info() != Eigen::Success)
    throw std::runtime_error("AmgHierarchy: coarse factorization failed");
  return h;
}

void AmgHierarchy::relax(const Level& lvl, const FieldVector& b, FieldVector& x,
                         int sweeps) const {
  FieldVector r(b.size());
  for (int s = 0; s < sweeps; ++s) {
    r.noalias() = b - lvl.A * x;
    x += opts_.jacobi_damping * lvl.inv_diag.cwiseProduct(r);
  }
}

void AmgHierarchy::cycle(int l, const FieldVector& r, FieldVector& z) const {
  const Level& lvl = levels_[size_t(l)];
  const bool coarsest = (l == int(levels_.size()) - 1);
  if (coarsest) {
    if (opts_.coarse_direct) {
      z = coarse_solver_.solve(r);
    } else {
      z.setZero();
      relax(lvl, r, z, opts_.coarse_sweeps);
    }
    return;
  }
  z.setZero();
  relax(lvl, r, z, opts_.pre_sweeps);
  FieldVector res = r - lvl.A * z;
  FieldVector rc = lvl.P.transpose() * res;
  FieldVector zc(rc.size());
  cycle(l + 1, rc, zc);
  z += lvl.P * zc;
  relax(lvl, r, z, opts_.post_sweeps);
}

void AmgHierarchy::vcycle(const FieldVector& r, FieldVector& z) const {
  z.resize(r.size());
  cycle(0, r, z);
}

}  // namespace semlab
