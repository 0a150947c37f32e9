#pragma once

#include <Eigen/Dense>

namespace affine2f {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector5 = Eigen::Matrix<Scalar, 5, 1>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix5 = Eigen::Matrix<Scalar, 5, 5>;

using Vector5d = Vector5<double>;
using Matrix5d = Matrix5<double>;

// Row-major dense storage for sample batches (one row per draw).
using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, 5, Eigen::RowMajor>;

}  // namespace affine2f
