#pragma once

#include <Eigen/Dense>

namespace riswt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Arr = Eigen::ArrayXd;
using Point2 = Eigen::Vector2d;

// Codeword storage is row-major so a single codeword is a contiguous span.
using CodewordMat =
    Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace riswt
