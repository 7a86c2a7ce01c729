#include "semlab/sem_space.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace semlab {

SemSpace::SemSpace(const HexMesh& mesh, int order, BcMode bc)
    : mesh_(&mesh), order_(order), bc_(bc), gll_(gll(order)) {
  const int nd = order_ + 1;
  nloc_ = nd * nd * nd;
  npts_ = {Index(mesh.nx()) * order_ + 1, Index(mesh.ny()) * order_ + 1,
           Index(mesh.nz()) * order_ + 1};
  n_ = npts_[0] * npts_[1] * npts_[2];

  coords_ = mesh.lattice_coords(order_);

  masked_.assign(size_t(n_), 0);
  if (bc_ == BcMode::Dirichlet) {
    for (Index k = 0; k < npts_[2]; ++k)
      for (Index j = 0; j < npts_[1]; ++j)
        for (Index i = 0; i < npts_[0]; ++i)
          if (i == 0 || i == npts_[0] - 1 || j == 0 || j == npts_[1] - 1 ||
              k == 0 || k == npts_[2] - 1)
            masked_[size_t(i + npts_[0] * (j + npts_[1] * k))] = 1;
  }
  n_free_ = n_ - std::accumulate(masked_.begin(), masked_.end(), Index(0));

  // local-to-global map and the deterministic gather lists
  const int ne = mesh.n_elements();
  local_to_global_.resize(size_t(ne) * nloc_);
  for (int e = 0; e < ne; ++e) {
    size_t l = size_t(e) * nloc_;
    for (int k = 0; k < nd; ++k)
      for (int j = 0; j < nd; ++j)
        for (int i = 0; i < nd; ++i) local_to_global_[l++] = global_index(e, i, j, k);
  }
  {
    std::vector<Index> order_idx(local_to_global_.size());
    std::iota(order_idx.begin(), order_idx.end(), Index(0));
    std::sort(order_idx.begin(), order_idx.end(), [&](Index a, Index b) {
      const Index ga = local_to_global_[size_t(a)], gb = local_to_global_[size_t(b)];
      return ga != gb ? ga < gb : a < b;
    });
    gather_offsets_.assign(size_t(n_) + 1, 0);
    for (Index l : order_idx) gather_offsets_[size_t(local_to_global_[size_t(l)]) + 1]++;
    for (Index g = 0; g < n_; ++g)
      gather_offsets_[size_t(g) + 1] += gather_offsets_[size_t(g)];
    gather_sources_ = std::move(order_idx);
  }
  multiplicity_.resize(n_);
  for (Index g = 0; g < n_; ++g)
    multiplicity_[g] =
        int(gather_offsets_[size_t(g) + 1] - gather_offsets_[size_t(g)]);

  // geometric factors
  geom_.resize(size_t(ne) * nloc_ * 6);
  massw_.resize(size_t(ne) * nloc_);
  std::vector<Eigen::Vector3d> xl(size_t(nloc_));
  for (int e = 0; e < ne; ++e) {
    for (int l = 0; l < nloc_; ++l) {
      const Index g = local_to_global_[size_t(e) * nloc_ + l];
      xl[size_t(l)] = Eigen::Vector3d(coords_[size_t(g) * 3 + 0],
                                      coords_[size_t(g) * 3 + 1],
                                      coords_[size_t(g) * 3 + 2]);
    }
    const auto at = [&](int i, int j, int k) -> const Eigen::Vector3d& {
      return xl[size_t(i + nd * (j + nd * k))];
    };
    for (int k = 0; k < nd; ++k)
      for (int j = 0; j < nd; ++j)
        for (int i = 0; i < nd; ++i) {
          Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
          for (int m = 0; m < nd; ++m) {
            J.col(0) += gll_.diff(i, m) * at(m, j, k);
            J.col(1) += gll_.diff(j, m) * at(i, m, k);
            J.col(2) += gll_.diff(k, m) * at(i, j, m);
          }
          const double det = J.determinant();
          if (det <= 0.0)
            throw std::runtime_error("SemSpace: non-positive Jacobian in element " +
                                     std::to_string(e));
          const double w = gll_.weights[i] * gll_.weights[j] * gll_.weights[k];
          const Eigen::Matrix3d Jinv = J.inverse();
          const Eigen::Matrix3d G = w * det * (Jinv * Jinv.transpose());
          const size_t base = (size_t(e) * nloc_ + size_t(i + nd * (j + nd * k))) * 6;
          geom_[base + 0] = G(0, 0);
          geom_[base + 1] = G(0, 1);
          geom_[base + 2] = G(0, 2);
          geom_[base + 3] = G(1, 1);
          geom_[base + 4] = G(1, 2);
          geom_[base + 5] = G(2, 2);
          massw_[size_t(e) * nloc_ + size_t(i + nd * (j + nd * k))] = w * det;
        }
  }

  FieldVector mw(n_local_total());
  for (Index l = 0; l < n_local_total(); ++l) mw[l] = massw_[size_t(l)];
  mass_diag_ = gather(mw);
}

void SemSpace::mask_inplace(FieldVector& v) const {
  if (bc_ != BcMode::Dirichlet) return;
  for (Index g = 0; g < n_; ++g)
    if (masked_[size_t(g)]) v[g] = 0.0;
}

FieldVector SemSpace::gather(const FieldVector& local) const {
  FieldVector out(n_);
  for (Index g = 0; g < n_; ++g) {
    double acc = 0.0;
    for (Index s = gather_offsets_[size_t(g)]; s < gather_offsets_[size_t(g) + 1]; ++s)
      acc += local[gather_sources_[size_t(s)]];
    out[g] = acc;
  }
  return out;
}

FieldVector SemSpace::scatter(const FieldVector& global) const {
  FieldVector out(n_local_total());
  for (Index l = 0; l < n_local_total(); ++l) out[l] = global[local_to_global_[size_t(l)]];
  return out;
}

template <bool Counted>
void SemSpace::local_stiffness_kernel(int e, const double* in, double* out,
                                      double* scratch, std::uint64_t* mults) const {
  const int nd = order_ + 1;
  const int n2 = nd * nd;
  const double* D = gll_.diff.data();  // column-major (i,m) at D[i + nd*m]
  double* ur = scratch;
  double* us = scratch + nloc_;
  double* ut = scratch + 2 * nloc_;

  for (int k = 0; k < nd; ++k)
    for (int j = 0; j < nd; ++j)
      for (int i = 0; i < nd; ++i) {
        const int idx = i + nd * j + n2 * k;
        double dr = 0, ds = 0, dt = 0;
        for (int m = 0; m < nd; ++m) {
          dr += D[i + nd * m] * in[m + nd * j + n2 * k];
          ds += D[j + nd * m] * in[i + nd * m + n2 * k];
          dt += D[k + nd * m] * in[i + nd * j + n2 * m];
          if constexpr (Counted) *mults += 3;
        }
        ur[idx] = dr;
        us[idx] = ds;
        ut[idx] = dt;
      }

  const double* G = &geom_[size_t(e) * nloc_ * 6];
  for (int idx = 0; idx < nloc_; ++idx) {
    const double* g = G + size_t(idx) * 6;
    const double r = ur[idx], s = us[idx], t = ut[idx];
    ur[idx] = g[0] * r + g[1] * s + g[2] * t;
    us[idx] = g[1] * r + g[3] * s + g[4] * t;
    ut[idx] = g[2] * r + g[4] * s + g[5] * t;
    if constexpr (Counted) *mults += 9;
  }

  for (int k = 0; k < nd; ++k)
    for (int j = 0; j < nd; ++j)
      for (int i = 0; i < nd; ++i) {
        double acc = 0;
        for (int m = 0; m < nd; ++m) {
          acc += D[m + nd * i] * ur[m + nd * j + n2 * k];
          acc += D[m + nd * j] * us[i + nd * m + n2 * k];
          acc += D[m + nd * k] * ut[i + nd * j + n2 * m];
          if constexpr (Counted) *mults += 3;
        }
        out[i + nd * j + n2 * k] = acc;
      }
}

void SemSpace::apply_local_stiffness(int e, const double* in, double* out) const {
  std::vector<double> scratch(size_t(nloc_) * 3);
  local_stiffness_kernel<false>(e, in, out, scratch.data(), nullptr);
}

std::uint64_t SemSpace::local_stiffness_mults() const {
  const std::uint64_t nd = order_ + 1;
  return 6 * nd * nd * nd * nd + 9 * nd * nd * nd;
}

std::uint64_t SemSpace::count_local_stiffness_mults(int e) const {
  std::vector<double> in(size_t(nloc_), 1.0), out(size_t(nloc_));
  std::vector<double> scratch(size_t(nloc_) * 3);
  std::uint64_t mults = 0;
  local_stiffness_kernel<true>(e, in.data(), out.data(), scratch.data(), &mults);
  return mults;
}

FieldVector SemSpace::apply_A(const FieldVector& u) const {
  FieldVector v = u;
  mask_inplace(v);
  FieldVector ul = scatter(v);
  FieldVector rl(n_local_total());
  std::vector<double> scratch(size_t(nloc_) * 3);
  for (int e = 0; e < mesh_->n_elements(); ++e)
    local_stiffness_kernel<false>(e, ul.data() + Index(e) * nloc_,
                                  rl.data() + Index(e) * nloc_, scratch.data(),
                                  nullptr);
  FieldVector r = gather(rl);
  mask_inplace(r);
  if (bc_ == BcMode::Neumann) r.array() -= r.mean();
  return r;
}

FieldVector SemSpace::stiffness_diag() const {
  const int nd = order_ + 1;
  const int n2 = nd * nd;
  FieldVector dl(n_local_total());
  for (int e = 0; e < mesh_->n_elements(); ++e) {
    const double* G = &geom_[size_t(e) * nloc_ * 6];
    for (int k = 0; k < nd; ++k)
      for (int j = 0; j < nd; ++j)
        for (int i = 0; i < nd; ++i) {
          double acc = 0;
          for (int m = 0; m < nd; ++m) {
            acc += gll_.diff(m, i) * gll_.diff(m, i) * G[size_t(m + nd * j + n2 * k) * 6 + 0];
            acc += gll_.diff(m, j) * gll_.diff(m, j) * G[size_t(i + nd * m + n2 * k) * 6 + 3];
            acc += gll_.diff(m, k) * gll_.diff(m, k) * G[size_t(i + nd * j + n2 * m) * 6 + 5];
          }
          const double* gp = G + size_t(i + nd * j + n2 * k) * 6;
          acc += 2.0 * (gll_.diff(i, i) * gll_.diff(j, j) * gp[1] +
                        gll_.diff(i, i) * gll_.diff(k, k) * gp[2] +
                        gll_.diff(j, j) * gll_.diff(k, k) * gp[4]);
          dl[Index(e) * nloc_ + (i + nd * j + n2 * k)] = acc;
        }
  }
  FieldVector d = gather(dl);
  mask_inplace(d);
  return d;
}

}  // namespace semlab
