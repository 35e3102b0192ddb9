#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace fbms {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Ambient dimension of every numerical computation in the library.
inline constexpr int kAmbientDim = 3;
/// Dimension of the discrete surfaces; the Minkowski coefficient.
inline constexpr int kSurfaceDim = kAmbientDim - 1;

}  // namespace fbms
