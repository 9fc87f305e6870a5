#pragma once

#include <Eigen/Core>

namespace seqcast {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace seqcast
