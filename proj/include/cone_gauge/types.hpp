#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

namespace cone_gauge {

using Complex = std::complex<double>;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace cone_gauge
