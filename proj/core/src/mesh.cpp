#include "semlab/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "semlab/gll.hpp"

namespace semlab {

namespace {

// Shear profile toward the right boundary; identity for eps = 1.
double profile_right(double eps, double x) {
  return (x <= 0.5) ? (2.0 - eps) * x : 1.0 + eps * (x - 1.0);
}

double profile_left(double eps, double x) {
  return 1.0 - profile_right(eps, 1.0 - x);
}

// Cubic smoothstep blend from a (t=0) to b (t=1); C^1 at the endpoints.
double blend(double a, double b, double t) {
  if (t <= 0.0) return a;
  if (t >= 1.0) return b;
  return a + (b - a) * t * t * (3.0 - 2.0 * t);
}

double kershaw_profile(double eps, double x, double s) {
  // Six x-layers: pure left, left->right, right->left (over two layers),
  // left->right, pure right.
  const int layer = std::min(static_cast<int>(x * 6.0), 5);
  const double lam = x * 6.0 - layer;
  const double l = profile_left(eps, s);
  const double r = profile_right(eps, s);
  switch (layer) {
    case 0: return l;
    case 1: return blend(l, r, lam);
    case 2: return blend(r, l, lam / 2.0);
    case 3: return blend(r, l, (1.0 + lam) / 2.0);
    case 4: return blend(l, r, lam);
    default: return r;
  }
}

}  // namespace

std::array<double, 3> kershaw_map(double eps, double x, double y, double z) {
  return {x - 0.5, kershaw_profile(eps, x, y) - 0.5,
          kershaw_profile(eps, x, z) - 0.5};
}

HexMesh::HexMesh(std::array<int, 3> dims, MapFn map)
    : dims_(dims), map_(std::move(map)) {
  if (dims_[0] < 1 || dims_[1] < 1 || dims_[2] < 1)
    throw std::invalid_argument("HexMesh: element counts must be positive");
  elements_.reserve(static_cast<size_t>(n_elements()));
  for (int k = 0; k < dims_[2]; ++k)
    for (int j = 0; j < dims_[1]; ++j)
      for (int i = 0; i < dims_[0]; ++i) {
        HexElement el;
        el.id = element_id(i, j, k);
        el.ijk = {i, j, k};
        int c = 0;
        for (int ck = 0; ck <= 1; ++ck)
          for (int cj = 0; cj <= 1; ++cj)
            for (int ci = 0; ci <= 1; ++ci)
              el.corners[c++] = map_(double(i + ci) / dims_[0],
                                     double(j + cj) / dims_[1],
                                     double(k + ck) / dims_[2]);
        elements_.push_back(el);
      }
  for (int e = 0; e < n_elements(); ++e)
    for (int f = 0; f < 6; ++f)
      if (neighbor(e, f) < 0) boundary_faces_.insert({e, f});
}

HexMesh HexMesh::box(std::array<int, 3> dims, std::array<double, 3> lo,
                     std::array<double, 3> hi) {
  return HexMesh(dims, [lo, hi](double x, double y, double z) {
    return std::array<double, 3>{lo[0] + (hi[0] - lo[0]) * x,
                                 lo[1] + (hi[1] - lo[1]) * y,
                                 lo[2] + (hi[2] - lo[2]) * z};
  });
}

HexMesh HexMesh::from_map(std::array<int, 3> dims, MapFn map) {
  return HexMesh(dims, std::move(map));
}

int HexMesh::neighbor(int e, int face) const {
  const auto& ijk = elements_[e].ijk;
  std::array<int, 3> n = ijk;
  const int axis = face / 2;
  n[axis] += (face % 2 == 0) ? -1 : 1;
  if (n[axis] < 0 || n[axis] >= dims_[axis]) return -1;
  return element_id(n[0], n[1], n[2]);
}

std::vector<double> HexMesh::lattice_coords(int order) const {
  const Gll1D& g = gll(order);
  const std::array<Index, 3> npts = {Index(dims_[0]) * order + 1,
                                     Index(dims_[1]) * order + 1,
                                     Index(dims_[2]) * order + 1};
  // 1D unit coordinates per axis, computed once so every element sees the
  // same bit pattern for a shared physical point.
  std::array<std::vector<double>, 3> axis;
  for (int d = 0; d < 3; ++d) {
    axis[d].resize(static_cast<size_t>(npts[d]));
    for (Index gidx = 0; gidx < npts[d]; ++gidx) {
      Index e = gidx / order, i = gidx % order;
      if (e == dims_[d]) {  // last lattice point belongs to the last element
        e -= 1;
        i = order;
      }
      axis[d][size_t(gidx)] =
          (double(e) + 0.5 * (g.nodes[i] + 1.0)) / dims_[d];
    }
  }
  std::vector<double> out(static_cast<size_t>(npts[0] * npts[1] * npts[2]) * 3);
  size_t idx = 0;
  for (Index k = 0; k < npts[2]; ++k)
    for (Index j = 0; j < npts[1]; ++j)
      for (Index i = 0; i < npts[0]; ++i) {
        const auto p = map_(axis[0][size_t(i)], axis[1][size_t(j)],
                            axis[2][size_t(k)]);
        out[idx++] = p[0];
        out[idx++] = p[1];
        out[idx++] = p[2];
      }
  return out;
}

HexMesh generate_kershaw(const KershawParams& params, int p) {
  if (!(params.eps > 0.0) || params.eps > 1.0)
    throw std::invalid_argument("generate_kershaw: eps must lie in (0,1]");
  if (params.elements_per_axis < 2 || params.elements_per_axis % 2 != 0)
    throw std::invalid_argument(
        "generate_kershaw: elements_per_axis must be even and >= 2");
  const double eps = params.eps;
  const int n = params.elements_per_axis;
  HexMesh mesh({n, n, n}, [eps](double x, double y, double z) {
    return kershaw_map(eps, x, y, z);
  });

  // Store the isoparametric nodal geometry and reject degenerate output.
  const auto lattice = mesh.lattice_coords(p);
  const Index nl = Index(n) * p + 1;
  const int nd = p + 1;
  mesh.curved_order_ = p;
  mesh.curved_coords_.resize(size_t(mesh.n_elements()) * nd * nd * nd * 3);
  size_t idx = 0;
  for (const auto& el : mesh.elements()) {
    for (int k = 0; k <= p; ++k)
      for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= p; ++i) {
          const Index g = (el.ijk[0] * Index(p) + i) +
                          nl * ((el.ijk[1] * Index(p) + j) +
                                nl * (el.ijk[2] * Index(p) + k));
          mesh.curved_coords_[idx++] = lattice[size_t(g) * 3 + 0];
          mesh.curved_coords_[idx++] = lattice[size_t(g) * 3 + 1];
          mesh.curved_coords_[idx++] = lattice[size_t(g) * 3 + 2];
        }
  }
  compute_metrics(mesh, p);  // throws on non-positive Jacobians
  return mesh;
}

MeshMetrics compute_metrics(const HexMesh& mesh, int p) {
  const Gll1D& g = gll(p);
  const auto lattice = mesh.lattice_coords(p);
  const std::array<Index, 3> nl = {Index(mesh.nx()) * p + 1,
                                   Index(mesh.ny()) * p + 1,
                                   Index(mesh.nz()) * p + 1};
  const int nd = p + 1;
  const auto node = [&](Index gx, Index gy, Index gz) {
    const Index gg = gx + nl[0] * (gy + nl[1] * gz);
    return Eigen::Vector3d(lattice[size_t(gg) * 3 + 0],
                           lattice[size_t(gg) * 3 + 1],
                           lattice[size_t(gg) * 3 + 2]);
  };

  MeshMetrics m;
  m.scaled_jacobian.min = m.aspect_ratio.min = std::numeric_limits<double>::max();
  m.gll_spacing_min = std::numeric_limits<double>::max();
  double sj_sum = 0.0, ar_sum = 0.0;
  Index n_pts = 0;

  std::vector<Eigen::Vector3d> coords(size_t(nd) * nd * nd);
  for (const auto& el : mesh.elements()) {
    const Index ox = el.ijk[0] * Index(p), oy = el.ijk[1] * Index(p),
                oz = el.ijk[2] * Index(p);
    for (int k = 0; k < nd; ++k)
      for (int j = 0; j < nd; ++j)
        for (int i = 0; i < nd; ++i)
          coords[size_t(i + nd * (j + nd * k))] = node(ox + i, oy + j, oz + k);

    const auto at = [&](int i, int j, int k) -> const Eigen::Vector3d& {
      return coords[size_t(i + nd * (j + nd * k))];
    };
    for (int k = 0; k < nd; ++k)
      for (int j = 0; j < nd; ++j)
        for (int i = 0; i < nd; ++i) {
          Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
          for (int mth = 0; mth < nd; ++mth) {
            J.col(0) += g.diff(i, mth) * at(mth, j, k);
            J.col(1) += g.diff(j, mth) * at(i, mth, k);
            J.col(2) += g.diff(k, mth) * at(i, j, mth);
          }
          const double det = J.determinant();
          if (det <= 0.0)
            throw std::runtime_error(
                "compute_metrics: non-positive Jacobian in element " +
                std::to_string(el.id));
          const double sj =
              det / (J.col(0).norm() * J.col(1).norm() * J.col(2).norm());
          const Eigen::JacobiSVD<Eigen::Matrix3d> svd(J);
          const double ar = svd.singularValues()(0) / svd.singularValues()(2);
          m.scaled_jacobian.min = std::min(m.scaled_jacobian.min, sj);
          m.scaled_jacobian.max = std::max(m.scaled_jacobian.max, sj);
          m.aspect_ratio.min = std::min(m.aspect_ratio.min, ar);
          m.aspect_ratio.max = std::max(m.aspect_ratio.max, ar);
          sj_sum += sj;
          ar_sum += ar;
          ++n_pts;
        }

    // adjacent-node spacing along the three lattice directions
    for (int k = 0; k < nd; ++k)
      for (int j = 0; j < nd; ++j)
        for (int i = 0; i < nd; ++i) {
          const auto consider = [&](const Eigen::Vector3d& a,
                                    const Eigen::Vector3d& b) {
            const double d = (a - b).norm();
            m.gll_spacing_min = std::min(m.gll_spacing_min, d);
            m.gll_spacing_max = std::max(m.gll_spacing_max, d);
          };
          if (i + 1 < nd) consider(at(i, j, k), at(i + 1, j, k));
          if (j + 1 < nd) consider(at(i, j, k), at(i, j + 1, k));
          if (k + 1 < nd) consider(at(i, j, k), at(i, j, k + 1));
        }
  }
  m.scaled_jacobian.avg = sj_sum / double(n_pts);
  m.aspect_ratio.avg = ar_sum / double(n_pts);
  return m;
}

void dump_mesh(const HexMesh& mesh, int p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_mesh: cannot open " + path);
  out << mesh.n_elements() << " " << p << "\n";
  const auto lattice = mesh.lattice_coords(p);
  const std::array<Index, 3> nl = {Index(mesh.nx()) * p + 1,
                                   Index(mesh.ny()) * p + 1,
                                   Index(mesh.nz()) * p + 1};
  char buf[128];
  for (const auto& el : mesh.elements())
    for (int k = 0; k <= p; ++k)
      for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= p; ++i) {
          const Index g = (el.ijk[0] * Index(p) + i) +
                          nl[0] * ((el.ijk[1] * Index(p) + j) +
                                   nl[1] * (el.ijk[2] * Index(p) + k));
          std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n",
                        lattice[size_t(g) * 3 + 0], lattice[size_t(g) * 3 + 1],
                        lattice[size_t(g) * 3 + 2]);
          out << buf;
        }
}

}  // namespace semlab
