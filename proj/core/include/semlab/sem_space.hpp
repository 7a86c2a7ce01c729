#pragma once

#include <cstdint>
#include <vector>

#include "semlab/gll.hpp"
#include "semlab/mesh.hpp"
#include "semlab/types.hpp"

namespace semlab {

enum class BcMode { Dirichlet, Neumann };

/// Discrete spectral element space on a HexMesh at one polynomial order:
/// GLL basis data, per-element geometric factors, the local-to-global
/// gather/scatter maps, the Dirichlet mask, and matrix-free application of
/// the assembled stiffness operator.
///
/// Global dofs are the points of the structured GLL lattice (boundary
/// included); the mask pins the boundary layer for the Dirichlet problem.
/// In Neumann mode nothing is masked and the constant nullspace is projected
/// out after every operator application.
///
/// All setup data is immutable after construction; the apply/gather methods
/// are const and safe to call concurrently.
class SemSpace {
 public:
  SemSpace(const HexMesh& mesh, int order, BcMode bc = BcMode::Dirichlet);

  const HexMesh& mesh() const { return *mesh_; }
  int order() const { return order_; }
  BcMode bc() const { return bc_; }
  const Gll1D& basis() const { return gll_; }

  Index n() const { return n_; }            // all lattice dofs
  Index n_free() const { return n_free_; }  // unmasked dofs
  int nodes_per_element() const { return nloc_; }
  Index n_local_total() const { return Index(mesh_->n_elements()) * nloc_; }

  Index lattice_nx() const { return npts_[0]; }
  Index lattice_ny() const { return npts_[1]; }
  Index lattice_nz() const { return npts_[2]; }

  Index global_index(int e, int i, int j, int k) const {
    const auto& ijk = mesh_->element(e).ijk;
    return (Index(ijk[0]) * order_ + i) +
           npts_[0] * ((Index(ijk[1]) * order_ + j) +
                       npts_[1] * (Index(ijk[2]) * order_ + k));
  }

  bool is_masked(Index g) const { return masked_[size_t(g)] != 0; }
  const std::vector<std::uint8_t>& mask() const { return masked_; }
  const std::vector<double>& lattice_coords() const { return coords_; }
  const Eigen::VectorXi& multiplicity() const { return multiplicity_; }

  /// Zero masked entries (no-op in Neumann mode).
  void mask_inplace(FieldVector& v) const;
  FieldVector masked(FieldVector v) const {
    mask_inplace(v);
    return v;
  }

  /// Assembled masked stiffness matvec, mask o Q^T A_L Q o mask. SPD on the
  /// masked subspace. Neumann mode projects out the constant mode instead of
  /// masking.
  FieldVector apply_A(const FieldVector& u) const;

  /// A^e u^e through tensor contractions; never forms A^e. in/out are
  /// (order+1)^3 element-local arrays.
  void apply_local_stiffness(int e, const double* in, double* out) const;

  /// Diagonal mass matvec (no mask; integrates over the whole domain).
  FieldVector apply_mass(const FieldVector& u) const { return mass_diag_.cwiseProduct(u); }
  const FieldVector& mass_diag() const { return mass_diag_; }

  /// Assembled diagonal of the masked stiffness operator (masked entries 0).
  FieldVector stiffness_diag() const;

  /// Q^T: sum element-local values into global dofs; the per-dof summation
  /// order is fixed (sorted by global id, then local slot) so results are
  /// bitwise reproducible.
  FieldVector gather(const FieldVector& local) const;
  /// Q: copy global values to element-local storage.
  FieldVector scatter(const FieldVector& global) const;
  /// QQ^T on element-local vectors (gather then scatter).
  FieldVector gather_scatter(const FieldVector& local) const {
    return scatter(gather(local));
  }

  /// Geometric factors at one GLL point of one element: the symmetric metric
  /// tensor w * det(J) * J^-1 J^-T packed as (rr, rs, rt, ss, st, tt), and
  /// the mass weight w * det(J).
  const double* metric_at(int e, int node) const {
    return &geom_[(size_t(e) * nloc_ + node) * 6];
  }
  double mass_weight_at(int e, int node) const {
    return massw_[size_t(e) * nloc_ + node];
  }

  /// Multiplications performed by one apply_local_stiffness call; grows as
  /// O(p^4) per element.
  std::uint64_t local_stiffness_mults() const;
  /// Same count measured by instrumenting the kernel loops.
  std::uint64_t count_local_stiffness_mults(int e) const;

 private:
  template <bool Counted>
  void local_stiffness_kernel(int e, const double* in, double* out,
                              double* scratch, std::uint64_t* mults) const;

  const HexMesh* mesh_;
  int order_;
  BcMode bc_;
  Gll1D gll_;
  int nloc_ = 0;
  std::array<Index, 3> npts_{};
  Index n_ = 0, n_free_ = 0;

  std::vector<double> coords_;         // n*3
  std::vector<std::uint8_t> masked_;   // n
  std::vector<double> geom_;           // E*nloc*6
  std::vector<double> massw_;          // E*nloc
  FieldVector mass_diag_;              // assembled
  Eigen::VectorXi multiplicity_;

  std::vector<Index> local_to_global_;   // flat local -> global
  std::vector<Index> gather_offsets_;    // n+1
  std::vector<Index> gather_sources_;    // flat local indices, sorted
};

}  // namespace semlab
