#include "gg/skeleton.hpp"

#include <json.hpp>

#include "gg/io_util.hpp"

namespace gg {

void Skeleton::validate() const {
  const int j = num_joints();
  require(j >= 1, "skeleton: no joints");
  require(static_cast<int>(offsets.size()) == j,
          "skeleton: offsets/parents length mismatch");
  int roots = 0;
  for (int i = 0; i < j; ++i) {
    if (parents[i] < 0) {
      ++roots;
      require(i == 0, "skeleton: root must be joint 0");
    } else {
      require(parents[i] < i,
              "skeleton: parent index must precede child (joint " +
                  std::to_string(i) + ")");
    }
  }
  require(roots == 1, "skeleton: exactly one root required, found " +
                          std::to_string(roots));
  for (int f : foot_joints)
    require(f >= 0 && f < j, "skeleton: foot joint index out of range");
  for (int u : upper_body_joints)
    require(u >= 0 && u < j, "skeleton: upper body joint index out of range");
}

Skeleton toy_skeleton() {
  Skeleton s;
  // Body layout follows the usual 55-joint convention:
  // 0 pelvis, 1/2 hips, 3 spine1, 4/5 knees, 6 spine2, 7/8 ankles, 9 spine3,
  // 10/11 feet, 12 neck, 13/14 collars, 15 head, 16/17 shoulders,
  // 18/19 elbows, 20/21 wrists, 22 jaw, 23/24 eyes, 25..39 left-hand fingers,
  // 40..54 right-hand fingers (index, middle, pinky, ring, thumb x 3).
  s.parents = {-1, 0,  0,  0,  1,  2,  3,  4,  5,  6,  7,  8,  9,  9,
               9,  12, 13, 14, 16, 17, 18, 19, 15, 15, 15, 20, 25, 26,
               20, 28, 29, 20, 31, 32, 20, 34, 35, 20, 37, 38, 21, 40,
               41, 21, 43, 44, 21, 46, 47, 21, 49, 50, 21, 52, 53};

  auto off = [](double x, double y, double z) {
    return std::array<double, 3>{x, y, z};
  };
  s.offsets = {
      off(0, 0, 0),            // 0 pelvis
      off(0.09, -0.07, 0),     // 1 l_hip
      off(-0.09, -0.07, 0),    // 2 r_hip
      off(0, 0.11, 0),         // 3 spine1
      off(0, -0.38, 0),        // 4 l_knee
      off(0, -0.38, 0),        // 5 r_knee
      off(0, 0.12, 0),         // 6 spine2
      off(0, -0.40, 0),        // 7 l_ankle
      off(0, -0.40, 0),        // 8 r_ankle
      off(0, 0.12, 0),         // 9 spine3
      off(0, -0.05, 0.13),     // 10 l_foot
      off(0, -0.05, 0.13),     // 11 r_foot
      off(0, 0.10, 0),         // 12 neck
      off(0.07, 0.07, 0),      // 13 l_collar
      off(-0.07, 0.07, 0),     // 14 r_collar
      off(0, 0.09, 0),         // 15 head
      off(0.10, 0.02, 0),      // 16 l_shoulder
      off(-0.10, 0.02, 0),     // 17 r_shoulder
      off(0.26, 0, 0),         // 18 l_elbow
      off(-0.26, 0, 0),        // 19 r_elbow
      off(0.25, 0, 0),         // 20 l_wrist
      off(-0.25, 0, 0),        // 21 r_wrist
      off(0, -0.03, 0.05),     // 22 jaw
      off(0.03, 0.04, 0.08),   // 23 l_eye
      off(-0.03, 0.04, 0.08),  // 24 r_eye
  };
  // Fingers: index, middle, pinky, ring, thumb; three 3.5 cm segments each.
  for (int hand = 0; hand < 2; ++hand) {
    const double sign = hand == 0 ? 1.0 : -1.0;
    const double z[5] = {0.025, 0.008, -0.025, -0.008, 0.02};
    for (int f = 0; f < 5; ++f) {
      s.offsets.push_back(off(sign * 0.08, 0, z[f]));  // knuckle from wrist
      s.offsets.push_back(off(sign * 0.035, 0, 0));
      s.offsets.push_back(off(sign * 0.035, 0, 0));
    }
  }

  s.foot_joints = {7, 8, 10, 11};
  // Spine chain, neck, collars, head, shoulders, elbows, wrists.
  s.upper_body_joints = {3, 6, 9, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21};
  s.validate();
  return s;
}

Skeleton load_skeleton(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("skeleton '" + path + "': invalid JSON: " + e.what());
  }
  Skeleton s;
  try {
    s.parents = j.at("parents").get<std::vector<int>>();
    for (const auto& o : j.at("offsets"))
      s.offsets.push_back({o.at(0).get<double>(), o.at(1).get<double>(),
                           o.at(2).get<double>()});
    s.foot_joints = j.at("foot_joints").get<std::vector<int>>();
    if (j.contains("upper_body_joints"))
      s.upper_body_joints = j["upper_body_joints"].get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("skeleton '" + path + "': missing field: " + e.what());
  }
  s.validate();
  return s;
}

void save_skeleton(const std::string& path, const Skeleton& skeleton) {
  nlohmann::json j;
  j["parents"] = skeleton.parents;
  auto offsets = nlohmann::json::array();
  for (const auto& o : skeleton.offsets) offsets.push_back({o[0], o[1], o[2]});
  j["offsets"] = offsets;
  j["foot_joints"] = skeleton.foot_joints;
  j["upper_body_joints"] = skeleton.upper_body_joints;
  atomic_write_text(path, j.dump(2) + "\n");
}

}  // namespace gg
