#pragma once

#include <Eigen/Dense>

namespace qra {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Rows are time steps, columns are <Z_i>, <Z_i Z_j> (i<j, lexicographic), then a constant 1.
using FeatureMatrix = Eigen::MatrixXd;

inline double mean_squared_error(const Vector& estimate, const Vector& truth) {
  return (estimate - truth).squaredNorm() / static_cast<double>(truth.size());
}

}  // namespace qra
