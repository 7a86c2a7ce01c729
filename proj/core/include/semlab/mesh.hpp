#pragma once

#include <array>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "semlab/types.hpp"

namespace semlab {

/// Kershaw family parameters: anisotropy eps in (0,1] (eps = 1 is the uniform
/// box) and the per-axis element count, which must be even so the y/z shear
/// kinks at the domain midplane land on element boundaries. Counts divisible
/// by 6 align the x-direction blend layers with element boundaries as well.
struct KershawParams {
  double eps = 1.0;
  int elements_per_axis = 6;
};

struct HexElement {
  int id = 0;
  std::array<int, 3> ijk{};                       // structured position
  std::array<std::array<double, 3>, 8> corners{}; // lexicographic, i fastest
};

struct MeshMetrics {
  struct Range {
    double min = 0, max = 0, avg = 0;
  };
  Range scaled_jacobian;  // det(J) / product of tangent-vector norms, in (0,1]
  Range aspect_ratio;     // max/min singular value of J, >= 1
  double gll_spacing_min = 0;  // physical distance between adjacent nodes
  double gll_spacing_max = 0;  // along parametric lattice lines
};

/// Curvilinear hexahedral tessellation of a box-topology domain.
///
/// The mesh is a structured nx*ny*nz grid of elements in a unit parameter
/// cube, pushed through a coordinate map. Nodal geometry at any order is
/// produced by mapping the global GLL lattice of the uniform grid, so shared
/// face/edge/corner nodes are generated once and coincide bitwise.
class HexMesh {
 public:
  // unit-cube coordinates in, physical coordinates out
  using MapFn = std::function<std::array<double, 3>(double, double, double)>;

  static HexMesh box(std::array<int, 3> dims, std::array<double, 3> lo,
                     std::array<double, 3> hi);
  static HexMesh from_map(std::array<int, 3> dims, MapFn map);

  int nx() const { return dims_[0]; }
  int ny() const { return dims_[1]; }
  int nz() const { return dims_[2]; }
  int n_elements() const { return dims_[0] * dims_[1] * dims_[2]; }

  int element_id(int i, int j, int k) const {
    return i + dims_[0] * (j + dims_[1] * k);
  }
  const HexElement& element(int e) const { return elements_[e]; }
  const std::vector<HexElement>& elements() const { return elements_; }

  /// Face ids: 0,1 = -x,+x; 2,3 = -y,+y; 4,5 = -z,+z. Returns -1 across a
  /// domain boundary.
  int neighbor(int e, int face) const;
  bool is_boundary_face(int e, int face) const { return neighbor(e, face) < 0; }
  const std::set<std::pair<int, int>>& boundary_faces() const {
    return boundary_faces_;
  }

  /// Physical coordinates of the global GLL lattice at the given order,
  /// flattened as (x,y,z) triples with the x lattice index fastest. The
  /// lattice has (nx*order+1)*(ny*order+1)*(nz*order+1) points.
  std::vector<double> lattice_coords(int order) const;

  /// Per-element nodal coordinates at the generation order (isoparametric
  /// geometry); empty for meshes built without one.
  const std::vector<double>& curved_coords() const { return curved_coords_; }
  int curved_order() const { return curved_order_; }

  std::array<double, 3> map_point(double x, double y, double z) const {
    return map_(x, y, z);
  }

 private:
  HexMesh(std::array<int, 3> dims, MapFn map);

  std::array<int, 3> dims_{};
  MapFn map_;
  std::vector<HexElement> elements_;
  std::set<std::pair<int, int>> boundary_faces_;
  std::vector<double> curved_coords_;
  int curved_order_ = 0;

  friend HexMesh generate_kershaw(const KershawParams&, int);
};

/// The Kershaw coordinate map on the unit cube, with image [-1/2,1/2]^3.
/// Identity in x; in y and z the left/right shear profiles are blended across
/// six x-layers with a cubic smoothstep, giving a C^1 profile in x. eps = 1
/// is the identity.
std::array<double, 3> kershaw_map(double eps, double x, double y, double z);

/// Generate a Kershaw mesh with nodal geometry at order p. Rejects invalid
/// parameters and meshes whose isoparametric Jacobian is not strictly
/// positive at every GLL point.
HexMesh generate_kershaw(const KershawParams& params, int p);

/// Scaled Jacobian, aspect ratio, and GLL spacing statistics over all GLL
/// points of all elements. Throws on a non-positive Jacobian, naming the
/// offending element.
MeshMetrics compute_metrics(const HexMesh& mesh, int p);

/// Plain-text nodal dump: "E p" on the first line, then per element the
/// (p+1)^3 node coordinates in lexicographic order, one "x y z" per line.
void dump_mesh(const HexMesh& mesh, int p, const std::string& path);

}  // namespace semlab
