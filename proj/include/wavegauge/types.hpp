#pragma once

#include <complex>
#include <Eigen/Dense>

namespace wavegauge {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cxd I_UNIT{0.0, 1.0};

} // namespace wavegauge
