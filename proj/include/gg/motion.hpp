#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gg/schedule.hpp"
#include "gg/tensor.hpp"

namespace gg {

// 55 joints in rot6d plus a 3-d global translation per frame.
constexpr int kNumJoints = 55;
constexpr int kRotDims = kNumJoints * 6;   // 330
constexpr int kTransDims = 3;
constexpr int kMotionDims = kRotDims + kTransDims;  // 333

struct MotionSequence {
  Tensor frames;               // [T, 333]
  double fps = 30.0;
  std::vector<uint8_t> mask;   // per-frame validity, length T

  int num_frames() const { return frames.defined() ? frames.rows() : 0; }
  int valid_frames() const;
};

MotionSequence make_motion(Tensor frames, double fps);

// MOTN file: magic, u32 T, u32 D=333, f32 fps, T*333 LE f64 values, then T
// mask bytes.
void save_motion(const std::string& path, const MotionSequence& motion);
MotionSequence load_motion(const std::string& path);

// Per-dimension normalization statistics over all valid frames of a corpus.
struct NormStats {
  Tensor mean;  // [333]
  Tensor std;   // [333], floored at 1e-6
};

NormStats compute_stats(const std::vector<MotionSequence>& corpus);

Tensor normalize(const Tensor& frames, const NormStats& stats);
Tensor denormalize(const Tensor& frames, const NormStats& stats);

// Forward-process noising: m_t = sqrt(ab_t)*m0 + sqrt(1-ab_t)*eps.
Tensor q_sample(const Tensor& m0_norm, int t, const Tensor& noise,
                const NoiseSchedule& schedule);

}  // namespace gg
