#include "semlab/schwarz.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace semlab {

namespace {

// out = M * in or M^T * in applied along one axis of an (nx,ny,nz) block.
void contract_x(const Eigen::MatrixXd& M, bool transpose, const double* in,
                double* out, int nx, int ny, int nz) {
  Eigen::Map<const Eigen::MatrixXd> I(in, nx, Index(ny) * nz);
  Eigen::Map<Eigen::MatrixXd> O(out, nx, Index(ny) * nz);
  if (transpose)
    O.noalias() = M.transpose() * I;
  else
    O.noalias() = M * I;
}

void contract_y(const Eigen::MatrixXd& M, bool transpose, const double* in,
                double* out, int nx, int ny, int nz) {
  for (int k = 0; k < nz; ++k) {
    Eigen::Map<const Eigen::MatrixXd> I(in + size_t(k) * nx * ny, nx, ny);
    Eigen::Map<Eigen::MatrixXd> O(out + size_t(k) * nx * ny, nx, ny);
    if (transpose)
      O.noalias() = I * M;  // sum_j M(j,b) I(i,j)
    else
      O.noalias() = I * M.transpose();
  }
}

void contract_z(const Eigen::MatrixXd& M, bool transpose, const double* in,
                double* out, int nx, int ny, int nz) {
  Eigen::Map<const Eigen::MatrixXd> I(in, Index(nx) * ny, nz);
  Eigen::Map<Eigen::MatrixXd> O(out, Index(nx) * ny, nz);
  if (transpose)
    O.noalias() = I * M;
  else
    O.noalias() = I * M.transpose();
}

}  // namespace

SchwarzSmoother::SchwarzSmoother(const SemSpace& space, SchwarzMode mode)
    : space_(&space), mode_(mode) {
  const HexMesh& mesh = space.mesh();
  const int ne = mesh.n_elements();
  const int q = space.order();
  const Gll1D& g = space.basis();

  // Box side lengths: mean of the four edge arc lengths per direction,
  // integrated with the level's GLL rule.
  std::vector<std::array<double, 3>> lengths(size_t(ne));
  std::vector<Eigen::Vector3d> edge(size_t(q) + 1);
  for (int e = 0; e < ne; ++e) {
    for (int d = 0; d < 3; ++d) {
      double total = 0.0;
      for (int ca = 0; ca <= 1; ++ca)
        for (int cb = 0; cb <= 1; ++cb) {
          for (int m = 0; m <= q; ++m) {
            int ijk[3];
            ijk[d] = m;
            ijk[(d + 1) % 3] = ca * q;
            ijk[(d + 2) % 3] = cb * q;
            const Index gg = space.global_index(e, ijk[0], ijk[1], ijk[2]);
            const auto& c = space.lattice_coords();
            edge[size_t(m)] = Eigen::Vector3d(c[size_t(gg) * 3 + 0],
                                              c[size_t(gg) * 3 + 1],
                                              c[size_t(gg) * 3 + 2]);
          }
          double len = 0.0;
          for (int m = 0; m <= q; ++m) {
            Eigen::Vector3d tangent = Eigen::Vector3d::Zero();
            for (int l = 0; l <= q; ++l) tangent += g.diff(m, l) * edge[size_t(l)];
            len += g.weights[m] * tangent.norm();
          }
          total += len;
        }
      lengths[size_t(e)][size_t(d)] = total / 4.0;
      if (!(lengths[size_t(e)][size_t(d)] > 0.0))
        throw std::runtime_error("SchwarzSmoother: degenerate element " +
                                 std::to_string(e));
    }
  }

  data_.resize(size_t(ne));
  for (int e = 0; e < ne; ++e)
    for (int d = 0; d < 3; ++d) build_direction(e, d, lengths);

  // Combined diagonal of the separable box operator.
  for (int e = 0; e < ne; ++e) {
    auto& ed = data_[size_t(e)];
    const int nx = ed.dir[0].n, ny = ed.dir[1].n, nz = ed.dir[2].n;
    ed.inv_D.resize(Index(nx) * ny * nz);
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const double s = ed.dir[0].lambda[i] + ed.dir[1].lambda[j] +
                           ed.dir[2].lambda[k];
          if (!(s > 0.0))
            throw std::runtime_error(
                "SchwarzSmoother: non-positive diagonal entry in element " +
                std::to_string(e));
          ed.inv_D[i + Index(nx) * (j + Index(ny) * k)] = 1.0 / s;
        }
  }

  // Overlap bookkeeping: contribution counts, ASM weights, RAS owners.
  counts_ = Eigen::VectorXi::Zero(space.n());
  owners_ = Eigen::VectorXi::Constant(space.n(), -1);
  const auto npx = space.lattice_nx(), npy = space.lattice_ny();
  for (int e = 0; e < ne; ++e) {
    const auto& ed = data_[size_t(e)];
    for (Index gz = ed.dir[2].lo; gz < ed.dir[2].lo + ed.dir[2].n; ++gz)
      for (Index gy = ed.dir[1].lo; gy < ed.dir[1].lo + ed.dir[1].n; ++gy)
        for (Index gx = ed.dir[0].lo; gx < ed.dir[0].lo + ed.dir[0].n; ++gx) {
          const int outside = int(ghost_site(ed, 0, gx)) +
                              int(ghost_site(ed, 1, gy)) +
                              int(ghost_site(ed, 2, gz));
          if (outside > 1) continue;
          const Index gg = gx + npx * (gy + npy * gz);
          counts_[gg] += 1;
          if (outside == 0 && owners_[gg] < 0) owners_[gg] = e;
        }
  }
  weights_ = FieldVector::Zero(space.n());
  for (Index i = 0; i < space.n(); ++i)
    if (counts_[i] > 0) weights_[i] = 1.0 / double(counts_[i]);
}

void SchwarzSmoother::build_direction(
    int e, int d, const std::vector<std::array<double, 3>>& lengths) {
  const SemSpace& space = *space_;
  const HexMesh& mesh = space.mesh();
  const int q = space.order();
  const Gll1D& g = space.basis();
  const double L = lengths[size_t(e)][size_t(d)];
  const double gap01 = 0.5 * (g.nodes[1] - g.nodes[0]);

  Dir1D dir;
  dir.box_length = L;
  const auto classify = [&](int face) {
    Side s;
    const int nb = mesh.neighbor(e, face);
    if (nb >= 0) {
      s.kind = Side::Interior;
      s.ghost_gap = lengths[size_t(nb)][size_t(d)] * gap01;
    } else {
      s.kind = space.bc() == BcMode::Dirichlet ? Side::DirichletFace
                                               : Side::NeumannFace;
    }
    return s;
  };
  dir.left = classify(2 * d);
  dir.right = classify(2 * d + 1);

  const int i0 = dir.left.kind == Side::DirichletFace ? 1 : 0;
  const int i1 = dir.right.kind == Side::DirichletFace ? q - 1 : q;
  const int ghosts_left = dir.left.kind == Side::Interior ? 1 : 0;
  const int ghosts_right = dir.right.kind == Side::Interior ? 1 : 0;
  dir.n = (i1 - i0 + 1) + ghosts_left + ghosts_right;
  if (dir.n < 1)
    throw std::runtime_error("SchwarzSmoother: element " + std::to_string(e) +
                             " has no local dofs in direction " +
                             std::to_string(d));
  dir.lo = Index(mesh.element(e).ijk[size_t(d)]) * q + i0 - ghosts_left;

  dir.A = Eigen::MatrixXd::Zero(dir.n, dir.n);
  dir.B = Eigen::MatrixXd::Zero(dir.n, dir.n);

  // element block, mapped from the reference interval to length L
  for (int i = i0; i <= i1; ++i) {
    const int a = i - i0 + ghosts_left;
    dir.B(a, a) += 0.5 * L * g.weights[i];
    for (int j = i0; j <= i1; ++j) {
      const int b = j - i0 + ghosts_left;
      double acc = 0.0;
      for (int m = 0; m <= q; ++m) acc += g.weights[m] * g.diff(m, i) * g.diff(m, j);
      dir.A(a, b) += (2.0 / L) * acc;
    }
  }

  // extension cells: a linear coupling cell to the face node plus a closure
  // cell of the same gap with a homogeneous Dirichlet end
  if (ghosts_left) {
    const double h = dir.left.ghost_gap;
    dir.A(0, 0) += 2.0 / h;
    dir.A(0, 1) += -1.0 / h;
    dir.A(1, 0) += -1.0 / h;
    dir.A(1, 1) += 1.0 / h;
    dir.B(0, 0) += h;
    dir.B(1, 1) += 0.5 * h;
  }
  if (ghosts_right) {
    const double h = dir.right.ghost_gap;
    const int last = dir.n - 1;
    dir.A(last, last) += 2.0 / h;
    dir.A(last, last - 1) += -1.0 / h;
    dir.A(last - 1, last) += -1.0 / h;
    dir.A(last - 1, last - 1) += 1.0 / h;
    dir.B(last, last) += h;
    dir.B(last - 1, last - 1) += 0.5 * h;
  }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(dir.A, dir.B);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("SchwarzSmoother: eigensolve failed in element " +
                             std::to_string(e));
  dir.S = eig.eigenvectors();
  dir.lambda = eig.eigenvalues();
  data_[size_t(e)].dir[size_t(d)] = std::move(dir);
}

bool SchwarzSmoother::ghost_site(const ElementData& ed, int d, Index g) const {
  const auto& dir = ed.dir[size_t(d)];
  if (dir.left.kind == Side::Interior && g == dir.lo) return true;
  if (dir.right.kind == Side::Interior && g == dir.lo + dir.n - 1) return true;
  return false;
}

std::array<double, 3> SchwarzSmoother::box_lengths(int e) const {
  return {data_[size_t(e)].dir[0].box_length, data_[size_t(e)].dir[1].box_length,
          data_[size_t(e)].dir[2].box_length};
}

Eigen::VectorXd SchwarzSmoother::fdm_solve(int e, const Eigen::VectorXd& local) const {
  const auto& ed = data_[size_t(e)];
  const int nx = ed.dir[0].n, ny = ed.dir[1].n, nz = ed.dir[2].n;
  Eigen::VectorXd t1(local.size()), t2(local.size());
  contract_x(ed.dir[0].S, true, local.data(), t1.data(), nx, ny, nz);
  contract_y(ed.dir[1].S, true, t1.data(), t2.data(), nx, ny, nz);
  contract_z(ed.dir[2].S, true, t2.data(), t1.data(), nx, ny, nz);
  t1.array() *= ed.inv_D.array();
  contract_x(ed.dir[0].S, false, t1.data(), t2.data(), nx, ny, nz);
  contract_y(ed.dir[1].S, false, t2.data(), t1.data(), nx, ny, nz);
  contract_z(ed.dir[2].S, false, t1.data(), t2.data(), nx, ny, nz);
  return t2;
}

FieldVector SchwarzSmoother::apply(const FieldVector& r) const {
  const SemSpace& space = *space_;
  const Index npx = space.lattice_nx(), npy = space.lattice_ny();
  FieldVector out = FieldVector::Zero(space.n());

  Eigen::VectorXd rloc, eloc;
  for (int e = 0; e < space.mesh().n_elements(); ++e) {
    const auto& ed = data_[size_t(e)];
    const int nx = ed.dir[0].n, ny = ed.dir[1].n, nz = ed.dir[2].n;
    const Index nloc = Index(nx) * ny * nz;
    if (nloc == 0) continue;
    rloc.resize(nloc);

    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const Index gx = ed.dir[0].lo + i, gy = ed.dir[1].lo + j,
                      gz = ed.dir[2].lo + k;
          const int outside = int(ghost_site(ed, 0, gx)) +
                              int(ghost_site(ed, 1, gy)) +
                              int(ghost_site(ed, 2, gz));
          rloc[i + Index(nx) * (j + Index(ny) * k)] =
              outside <= 1 ? r[gx + npx * (gy + npy * gz)] : 0.0;
        }

    eloc = fdm_solve(e, rloc);

    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          const Index gx = ed.dir[0].lo + i, gy = ed.dir[1].lo + j,
                      gz = ed.dir[2].lo + k;
          const int outside = int(ghost_site(ed, 0, gx)) +
                              int(ghost_site(ed, 1, gy)) +
                              int(ghost_site(ed, 2, gz));
          if (outside > 1) continue;
          const Index gg = gx + npx * (gy + npy * gz);
          if (mode_ == SchwarzMode::Ras) {
            if (owners_[gg] == e) out[gg] = eloc[i + Index(nx) * (j + Index(ny) * k)];
          } else {
            out[gg] += eloc[i + Index(nx) * (j + Index(ny) * k)];
          }
        }
  }

  if (mode_ == SchwarzMode::Asm) out.array() *= weights_.array();
  return out;
}

}  // namespace semlab
