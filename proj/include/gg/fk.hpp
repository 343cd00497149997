#pragma once

#include <vector>

#include "gg/motion.hpp"
#include "gg/rot6d.hpp"
#include "gg/skeleton.hpp"

namespace gg {

// World-space joint positions, row-major [T x J x 3].
struct JointPositions {
  int frames = 0;
  int joints = 0;
  std::vector<double> values;

  const double* at(int t, int j) const {
    return values.data() + (static_cast<size_t>(t) * joints + j) * 3;
  }
  double* at(int t, int j) {
    return values.data() + (static_cast<size_t>(t) * joints + j) * 3;
  }
};

// Root position = global translation; child = parent position + parent world
// rotation * bone offset; world rotations compose down the tree.
JointPositions forward_kinematics(const MotionSequence& motion,
                                  const Skeleton& skeleton,
                                  bool zero_translation = false);

}  // namespace gg
