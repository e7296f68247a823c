#pragma once

#include <Eigen/Core>
#include <Eigen/Cholesky>

namespace fjr {

// Upper bound on joints per plant. Joint-space vectors and matrices are
// dynamically sized but stack-allocated up to this bound, so the integrator
// never touches the heap.
inline constexpr int kMaxJoints = 7;

using JointVector =
    Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxJoints, 1>;
using JointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                  Eigen::ColMajor, kMaxJoints, kMaxJoints>;

inline JointVector constant_vector(int n, double value) {
  return JointVector::Constant(n, value);
}

}  // namespace fjr
