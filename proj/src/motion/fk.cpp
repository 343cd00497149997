#include "gg/fk.hpp"

namespace gg {

JointPositions forward_kinematics(const MotionSequence& motion,
                                  const Skeleton& skeleton,
                                  bool zero_translation) {
  skeleton.validate();
  const int j = skeleton.num_joints();
  require(j == kNumJoints, "forward_kinematics: skeleton joint count " +
                               std::to_string(j) + " != " +
                               std::to_string(kNumJoints));
  const int t_count = motion.num_frames();
  require(t_count > 0, "forward_kinematics: empty motion");

  JointPositions out;
  out.frames = t_count;
  out.joints = j;
  out.values.resize(static_cast<size_t>(t_count) * j * 3);

  std::vector<Mat3> world(j);
  for (int t = 0; t < t_count; ++t) {
    const double* row = motion.frames.data() + static_cast<size_t>(t) * kMotionDims;
    const double* trans = row + kRotDims;
    for (int i = 0; i < j; ++i) {
      const Mat3 local = rot6d_to_matrix(row + i * 6);
      double* pos = out.at(t, i);
      const int p = skeleton.parents[i];
      if (p < 0) {
        world[i] = local;
        pos[0] = zero_translation ? 0.0 : trans[0];
        pos[1] = zero_translation ? 0.0 : trans[1];
        pos[2] = zero_translation ? 0.0 : trans[2];
      } else {
        world[i] = mat3_mul(world[p], local);
        const Vec3 step = mat3_apply(world[p], skeleton.offsets[i]);
        const double* parent_pos = out.at(t, p);
        pos[0] = parent_pos[0] + step[0];
        pos[1] = parent_pos[1] + step[1];
        pos[2] = parent_pos[2] + step[2];
      }
    }
  }
  return out;
}

}  // namespace gg
