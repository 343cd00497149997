#pragma once

#include <array>
#include <string>
#include <vector>

#include "gg/common.hpp"

namespace gg {

// Fixed-offset kinematic tree. Joints are topologically ordered (parent index
// smaller than child index) with exactly one root at index 0.
struct Skeleton {
  std::vector<int> parents;                    // root = -1
  std::vector<std::array<double, 3>> offsets;  // bone offsets, meters
  std::vector<int> foot_joints;
  std::vector<int> upper_body_joints;  // beat/jitter subset, fingers excluded

  int num_joints() const { return static_cast<int>(parents.size()); }
  void validate() const;
};

// 55-joint toy skeleton with plausible human proportions (pelvis root, legs,
// spine chain, arms, jaw/eyes, and 15 finger joints per hand).
Skeleton toy_skeleton();

// JSON: {"parents": [...], "offsets": [[x,y,z],...], "foot_joints": [...],
//        "upper_body_joints": [...]}  (last field optional)
Skeleton load_skeleton(const std::string& path);
void save_skeleton(const std::string& path, const Skeleton& skeleton);

}  // namespace gg
