#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace gfpc {

using Mat3  = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat23 = Eigen::Matrix<double, 2, 3>;
using Mat36 = Eigen::Matrix<double, 3, 6>;
using Vec2  = Eigen::Vector2d;
using Vec3  = Eigen::Vector3d;
using Vec4  = Eigen::Vector4d;

using Complex   = std::complex<double>;
using EigTriple = std::array<Complex, 3>;

}  // namespace gfpc
