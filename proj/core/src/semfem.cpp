#include "semlab/semfem.hpp"

#include <Eigen/Dense>
#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace semlab {

CsrMatrix assemble_semfem(const SemSpace& space, bool apply_bc) {
  const int p = space.order();
  const auto& coords = space.lattice_coords();
  const Index n = space.n();
  const auto point = [&](Index g) {
    return Eigen::Vector3d(coords[size_t(g) * 3 + 0], coords[size_t(g) * 3 + 1],
                           coords[size_t(g) * 3 + 2]);
  };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(space.mesh().n_elements()) * size_t(p) * p * p * 8 * 16);

  // Corner tet of a sub-cell: the corner plus its three edge-adjacent
  // vertices, ordered so the reference volume is positive.
  std::array<std::array<int, 4>, 8> tets;
  {
    int t = 0;
    for (int cz = 0; cz <= 1; ++cz)
      for (int cy = 0; cy <= 1; ++cy)
        for (int cx = 0; cx <= 1; ++cx) {
          const auto corner = [&](int x, int y, int z) {
            return x + 2 * y + 4 * z;
          };
          std::array<int, 4> tet = {corner(cx, cy, cz), corner(1 - cx, cy, cz),
                                    corner(cx, 1 - cy, cz), corner(cx, cy, 1 - cz)};
          const int parity = (cx + cy + cz) % 2;
          if (parity) std::swap(tet[1], tet[2]);
          tets[size_t(t++)] = tet;
        }
  }

  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    for (int k = 0; k < p; ++k)
      for (int j = 0; j < p; ++j)
        for (int i = 0; i < p; ++i) {
          std::array<Index, 8> cell;
          int c = 0;
          for (int cz = 0; cz <= 1; ++cz)
            for (int cy = 0; cy <= 1; ++cy)
              for (int cx = 0; cx <= 1; ++cx)
                cell[size_t(c++)] =
                    space.global_index(e, i + cx, j + cy, k + cz);

          for (const auto& tet : tets) {
            const Eigen::Vector3d p0 = point(cell[size_t(tet[0])]);
            Eigen::Matrix3d T;
            T.col(0) = point(cell[size_t(tet[1])]) - p0;
            T.col(1) = point(cell[size_t(tet[2])]) - p0;
            T.col(2) = point(cell[size_t(tet[3])]) - p0;
            const double det = T.determinant();
            if (det <= 0.0)
              throw std::runtime_error(
                  "assemble_semfem: inverted tetrahedron in element " +
                  std::to_string(e) + ", sub-cell (" + std::to_string(i) + "," +
                  std::to_string(j) + "," + std::to_string(k) + ")");
            const double vol = det / 6.0;

            // barycentric gradients: rows of T^-1 for vertices 1..3
            const Eigen::Matrix3d Tinv = T.inverse();
            std::array<Eigen::Vector3d, 4> grad;
            grad[1] = Tinv.row(0);
            grad[2] = Tinv.row(1);
            grad[3] = Tinv.row(2);
            grad[0] = -(grad[1] + grad[2] + grad[3]);

            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b) {
                const Index ga = cell[size_t(tet[size_t(a)])];
                const Index gb = cell[size_t(tet[size_t(b)])];
                if (apply_bc && (space.is_masked(ga) || space.is_masked(gb)))
                  continue;
                trip.emplace_back(ga, gb,
                                  0.5 * vol * grad[size_t(a)].dot(grad[size_t(b)]));
              }
          }
        }
  }

  if (apply_bc)
    for (Index g = 0; g < n; ++g)
      if (space.is_masked(g)) trip.emplace_back(g, g, 1.0);

  CsrMatrix A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.prune(0.0, 0.0);
  A.makeCompressed();
  return A;
}

void dump_matrix(const CsrMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_matrix: cannot open " + path);
  char buf[96];
  for (Index i = 0; i < m.rows(); ++i)
    for (CsrMatrix::InnerIterator it(m, i); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", long(it.row()),
                    long(it.col()), it.value());
      out << buf;
    }
}

SemfemPreconditioner::SemfemPreconditioner(const SemSpace& space,
                                           SemfemInner inner,
                                           const AmgOptions& amg_opts)
    : space_(&space), inner_(inner), matrix_(assemble_semfem(space)) {
  if (inner_ == SemfemInner::Amg) {
    amg_ = std::make_unique<AmgHierarchy>(AmgHierarchy::build(matrix_, amg_opts));
  } else {
    direct_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    direct_->compute(Eigen::SparseMatrix<double>(matrix_));
    if (direct_->info() != Eigen::Success)
      throw std::runtime_error("SemfemPreconditioner: factorization failed");
  }
}

void SemfemPreconditioner::apply(const FieldVector& r, FieldVector& z) const {
  if (inner_ == SemfemInner::Amg) {
    amg_->vcycle(r, z);
  } else {
    z = direct_->solve(r);
  }
  space_->mask_inplace(z);
}

}  // namespace semlab
