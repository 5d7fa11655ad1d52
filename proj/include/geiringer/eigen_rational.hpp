#pragma once

// Eigen support for the exact Rational scalar.

#include "geiringer/rational.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace geiringer {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

}  // namespace geiringer
