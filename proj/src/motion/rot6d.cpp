#include "gg/rot6d.hpp"

#include <cmath>

namespace gg {

namespace {
constexpr double kDegenerate = 1e-8;
}

Mat3 rot6d_to_matrix(const double r6[6]) {
  const double* a1 = r6;
  const double* a2 = r6 + 3;
  const double n1 = std::sqrt(a1[0] * a1[0] + a1[1] * a1[1] + a1[2] * a1[2]);
  require(n1 > kDegenerate, "rot6d_to_matrix: first column has zero norm");
  Vec3 b1{a1[0] / n1, a1[1] / n1, a1[2] / n1};

  const double d = b1[0] * a2[0] + b1[1] * a2[1] + b1[2] * a2[2];
  Vec3 u2{a2[0] - d * b1[0], a2[1] - d * b1[1], a2[2] - d * b1[2]};
  const double n2 = std::sqrt(u2[0] * u2[0] + u2[1] * u2[1] + u2[2] * u2[2]);
  require(n2 > kDegenerate,
          "rot6d_to_matrix: columns are parallel or second column is zero");
  Vec3 b2{u2[0] / n2, u2[1] / n2, u2[2] / n2};

  Vec3 b3{b1[1] * b2[2] - b1[2] * b2[1], b1[2] * b2[0] - b1[0] * b2[2],
          b1[0] * b2[1] - b1[1] * b2[0]};

  // b1, b2, b3 are the columns.
  return Mat3{b1[0], b2[0], b3[0], b1[1], b2[1], b3[1], b1[2], b2[2], b3[2]};
}

void matrix_to_rot6d(const Mat3& rotation, double r6[6]) {
  r6[0] = rotation[0];
  r6[1] = rotation[3];
  r6[2] = rotation[6];
  r6[3] = rotation[1];
  r6[4] = rotation[4];
  r6[5] = rotation[7];
}

Mat3 axis_angle_to_matrix(const Vec3& axis, double angle) {
  const double n =
      std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  require(n > 0, "axis_angle_to_matrix: zero axis");
  const double x = axis[0] / n, y = axis[1] / n, z = axis[2] / n;
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  return Mat3{t * x * x + c,     t * x * y - s * z, t * x * z + s * y,
              t * x * y + s * z, t * y * y + c,     t * y * z - s * x,
              t * x * z - s * y, t * y * z + s * x, t * z * z + c};
}

}  // namespace gg
