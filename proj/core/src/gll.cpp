#include "semlab/gll.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace semlab {

namespace {

// P_p(x) and P_p'(x) via the Bonnet recurrences.
std::pair<double, double> legendre(int p, double x) {
  if (p == 0) return {1.0, 0.0};
  double pm1 = 1.0, pn = x;      // P_{n-1}, P_n
  double dpm1 = 0.0, dpn = 1.0;  // P_{n-1}', P_n'
  for (int n = 2; n <= p; ++n) {
    const double pnext = ((2.0 * n - 1.0) * x * pn - (n - 1.0) * pm1) / n;
    const double dpnext = dpm1 + (2.0 * n - 1.0) * pn;
    pm1 = pn;
    dpm1 = dpn;
    pn = pnext;
    dpn = dpnext;
  }
  return {pn, dpn};
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      if (k != j) w[j] /= (nodes[j] - nodes[k]);
  return w;
}

Gll1D build_gll(int p) {
  Gll1D g;
  g.order = p;
  g.nodes.resize(p + 1);
  g.weights.resize(p + 1);
  g.nodes[0] = -1.0;
  g.nodes[p] = 1.0;

  // Interior nodes: Newton on P_p' with Chebyshev-Lobatto starting points.
  // P_p'' comes from the Legendre ODE (1-x^2) P'' = 2x P' - p(p+1) P.
  for (int j = 1; j < p; ++j) {
    double x = -std::cos(M_PI * j / p);
    for (int it = 0; it < 100; ++it) {
      const auto [pp, dp] = legendre(p, x);
      const double d2p = (2.0 * x * dp - p * (p + 1.0) * pp) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 4.0 * std::numeric_limits<double>::epsilon()) break;
    }
    g.nodes[j] = x;
  }
  // Enforce exact symmetry about the origin.
  for (int j = 1; j < p - j; ++j) {
    const double t = 0.5 * (g.nodes[p - j] - g.nodes[j]);
    g.nodes[j] = -t;
    g.nodes[p - j] = t;
  }
  if (p % 2 == 0) g.nodes[p / 2] = 0.0;

  for (int j = 0; j <= p; ++j) {
    const double pp = legendre(p, g.nodes[j]).first;
    g.weights[j] = 2.0 / (p * (p + 1.0) * pp * pp);
  }
  for (int j = 0; j < p + 1 - j; ++j) {
    const double t = 0.5 * (g.weights[j] + g.weights[p - j]);
    g.weights[j] = g.weights[p - j] = t;
  }

  g.diff = lagrange_diff_matrix(g.nodes);
  return g;
}

}  // namespace

const Gll1D& gll(int order) {
  if (order < 1 || order > kMaxGllOrder)
    throw std::invalid_argument("gll: order must be in [1," +
                                std::to_string(kMaxGllOrder) + "], got " +
                                std::to_string(order));
  static const auto table = [] {
    std::array<Gll1D, kMaxGllOrder + 1> t;
    for (int p = 1; p <= kMaxGllOrder; ++p) t[p] = build_gll(p);
    return t;
  }();
  return table[order];
}

Eigen::MatrixXd lagrange_interpolation_matrix(const Eigen::VectorXd& from_nodes,
                                              const Eigen::VectorXd& to_points) {
  const Eigen::Index n = from_nodes.size();
  const Eigen::Index m = to_points.size();
  const Eigen::VectorXd w = barycentric_weights(from_nodes);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = to_points[i];
    Eigen::Index hit = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (x == from_nodes[j]) {
        hit = j;
        break;
      }
    }
    if (hit >= 0) {
      out(i, hit) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) denom += w[j] / (x - from_nodes[j]);
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = (w[j] / (x - from_nodes[j])) / denom;
  }
  return out;
}

Eigen::MatrixXd lagrange_diff_matrix(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  const Eigen::VectorXd w = barycentric_weights(nodes);
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      d(i, j) = (w[j] / w[i]) / (nodes[i] - nodes[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;  // rows sum to zero: derivative of a constant vanishes
  }
  return d;
}

}  // namespace semlab
