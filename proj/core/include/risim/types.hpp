#pragma once

#include <complex>

#include <Eigen/Dense>

namespace risim {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

}  // namespace risim
