#pragma once

#include <Eigen/Dense>

namespace semlab {

/// 1D Gauss-Lobatto-Legendre collocation data for polynomial order p.
///
/// Nodes are the p+1 roots of (1-x^2) P_p'(x) on [-1,1] in ascending order,
/// weights are the GLL quadrature weights (sum = 2), and diff is the nodal
/// differentiation matrix: diff(i,j) = h_j'(nodes[i]) for the Lagrange
/// cardinal polynomials h_j. Rows of diff sum to zero.
struct Gll1D {
  int order = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::MatrixXd diff;
};

/// Cached GLL data, 1 <= order <= 16.
const Gll1D& gll(int order);

constexpr int kMaxGllOrder = 16;

/// Interpolation matrix from a nodal set to arbitrary points:
/// out(i,j) = l_j(to_points[i]) with l_j the Lagrange cardinals on from_nodes.
/// Uses the barycentric form; rows hitting a node exactly reduce to a delta.
Eigen::MatrixXd lagrange_interpolation_matrix(const Eigen::VectorXd& from_nodes,
                                              const Eigen::VectorXd& to_points);

/// Nodal differentiation matrix for an arbitrary strictly increasing node set.
Eigen::MatrixXd lagrange_diff_matrix(const Eigen::VectorXd& nodes);

}  // namespace semlab
