#pragma once

#include <Eigen/Core>
#include <functional>

namespace semlab {

// Global assembled degree-of-freedom vector. Dirichlet mask semantics live in
// SemSpace; every masked operator application leaves masked entries at exactly 0.
using FieldVector = Eigen::VectorXd;

// y = Op(x). Operators taking this shape are expected to be fixed linear maps.
using LinOp = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

using Index = Eigen::Index;

}  // namespace semlab
