#pragma once

#include <array>

#include "semlab/sem_space.hpp"
#include "semlab/types.hpp"

namespace semlab {

enum class SchwarzMode { Asm, Ras };

/// Overlapping Schwarz smoother with per-element fast-diagonalization solves
/// on box approximations of the deformed elements.
///
/// Each element is approximated by a box whose side lengths are the mean of
/// its four edge arc lengths per direction. The 1D operators on each box are
/// the GLL stiffness/mass pair extended by one degree of freedom across every
/// interior face (at the neighbor's first interior GLL gap, with a linear
/// coupling cell and a homogeneous Dirichlet closure one further gap out).
/// At a physical Dirichlet boundary the face dof is constrained instead, so
/// its row/column is dropped; Neumann boundaries keep the face dof with the
/// natural closure.
///
/// The local solves run on the full extended tensor box, but only sites
/// reachable through a single face exchange participate: residual sites more
/// than one parametric direction outside the element core are zero-filled on
/// extraction and their corrections are discarded. ASM sums the overlapped
/// corrections and post-scales by the counting weights; RAS keeps only the
/// owner element's correction at each dof (interior dofs are owned by their
/// element, shared dofs by the lowest element id).
class SchwarzSmoother {
 public:
  struct Side {
    enum Kind { Interior, DirichletFace, NeumannFace };
    Kind kind = DirichletFace;
    double ghost_gap = 0.0;  // extension spacing (Interior only)
  };

  struct Dir1D {
    int n = 0;      // active 1D dofs for this element/direction
    Index lo = 0;   // first global lattice index covered
    Side left, right;
    double box_length = 0.0;
    Eigen::MatrixXd A, B;     // extended 1D stiffness/mass
    Eigen::MatrixXd S;        // generalized eigenvectors, S^T B S = I
    Eigen::VectorXd lambda;   // S^T A S = diag(lambda)
  };

  SchwarzSmoother(const SemSpace& space, SchwarzMode mode);

  /// z = sum_e W_e R_e^T Abar_e^-1 R_e r
  FieldVector apply(const FieldVector& r) const;
  LinOp as_linop() const {
    return [this](const FieldVector& in, FieldVector& out) { out = apply(in); };
  }

  SchwarzMode mode() const { return mode_; }
  const SemSpace& space() const { return *space_; }

  std::array<double, 3> box_lengths(int e) const;
  const Dir1D& direction(int e, int d) const { return data_[size_t(e)].dir[size_t(d)]; }
  const Eigen::VectorXd& inverse_diagonal(int e) const { return data_[size_t(e)].inv_D; }
  const Eigen::VectorXi& subdomain_counts() const { return counts_; }
  const FieldVector& asm_weights() const { return weights_; }
  const Eigen::VectorXi& owners() const { return owners_; }

  /// Solve the element's box system for a local right-hand side laid out on
  /// the extended box lattice (x fastest).
  Eigen::VectorXd fdm_solve(int e, const Eigen::VectorXd& local) const;

 private:
  struct ElementData {
    std::array<Dir1D, 3> dir;
    Eigen::VectorXd inv_D;
  };

  void build_direction(int e, int d, const std::vector<std::array<double, 3>>& lengths);
  bool ghost_site(const ElementData& ed, int d, Index g) const;

  const SemSpace* space_;
  SchwarzMode mode_;
  std::vector<ElementData> data_;
  Eigen::VectorXi counts_;   // subdomains contributing at each global dof
  FieldVector weights_;      // ASM: 1/count at member dofs, else 0
  Eigen::VectorXi owners_;   // RAS ownership (element id, -1 for none)
};

}  // namespace semlab
