#pragma once

#include <Eigen/SparseCholesky>
#include <memory>
#include <string>

#include "semlab/amg.hpp"
#include "semlab/sem_space.hpp"
#include "semlab/types.hpp"

namespace semlab {

/// Sparse low-order stiffness operator on the GLL lattice of the space. Each
/// GLL sub-volume of every hexahedral element is covered by eight corner
/// tetrahedra (a vertex plus its three edge-adjacent sub-cell vertices);
/// linear-tet stiffness contributions are accumulated with an overall 1/2
/// factor for the double covering. The operator acts on exactly the same
/// global dofs as the high-order stiffness matrix.
///
/// With apply_bc set (the default) Dirichlet dofs are eliminated
/// symmetrically: zeroed rows/columns with a unit diagonal. Throws on an
/// inverted tetrahedron, naming the element and sub-cell.
CsrMatrix assemble_semfem(const SemSpace& space, bool apply_bc = true);

/// Coordinate-format text dump, one "row col value" per line in row-major
/// order.
void dump_matrix(const CsrMatrix& m, const std::string& path);

enum class SemfemInner { Amg, Direct };

/// Weak low-order preconditioner: z = A_F^-1 r, applied either as one AMG
/// V-cycle or as an exact sparse factorization solve (reference mode). No
/// mass scaling on either side.
class SemfemPreconditioner {
 public:
  SemfemPreconditioner(const SemSpace& space, SemfemInner inner,
                       const AmgOptions& amg_opts = {});

  void apply(const FieldVector& r, FieldVector& z) const;
  LinOp as_linop() const {
    return [this](const FieldVector& in, FieldVector& out) { apply(in, out); };
  }

  const CsrMatrix& matrix() const { return matrix_; }
  SemfemInner inner() const { return inner_; }
  const AmgHierarchy* hierarchy() const { return amg_.get(); }

 private:
  const SemSpace* space_;
  SemfemInner inner_;
  CsrMatrix matrix_;
  std::unique_ptr<AmgHierarchy> amg_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> direct_;
};

}  // namespace semlab
