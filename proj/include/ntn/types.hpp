#pragma once

#include <Eigen/Core>

namespace ntn {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec2 = Vector2<double>;
using Vec3 = Vector3<double>;
using VecX = VectorX<double>;
using MatX = MatrixX<double>;

}  // namespace ntn
