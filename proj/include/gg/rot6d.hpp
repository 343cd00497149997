#pragma once

#include <array>

#include "gg/common.hpp"

namespace gg {

using Mat3 = std::array<double, 9>;  // row-major 3x3
using Vec3 = std::array<double, 3>;

// Gram-Schmidt orthonormalization of the first two rotation-matrix columns.
// Strict variant for data loading and metrics: a (near-)degenerate input is
// a contract error. The training path uses the eps-regularized autodiff op
// in motion_ops.hpp instead.
Mat3 rot6d_to_matrix(const double r6[6]);

// First two columns of R, the inverse of the above for valid rotations.
void matrix_to_rot6d(const Mat3& rotation, double r6[6]);

Mat3 axis_angle_to_matrix(const Vec3& axis, double angle);

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      const double v = a[i * 3 + k];
      for (int j = 0; j < 3; ++j) c[i * 3 + j] += v * b[k * 3 + j];
    }
  return c;
}

inline Vec3 mat3_apply(const Mat3& m, const Vec3& v) {
  return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
          m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
          m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

}  // namespace gg
