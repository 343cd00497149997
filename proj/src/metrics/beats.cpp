#include "gg/beats.hpp"

#include <cmath>
#include <limits>

namespace gg {
namespace {

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  sd = std::sqrt(var / static_cast<double>(v.size()));
}

std::vector<int> effective_subset(const Skeleton& skeleton,
                                  const std::vector<int>& subset) {
  if (!subset.empty()) return subset;
  require(!skeleton.upper_body_joints.empty(),
          "motion beats: no joint subset given and skeleton has none");
  return skeleton.upper_body_joints;
}

}  // namespace

BeatSet detect_audio_beats_mel(const MelEnergy& mel, double threshold_k) {
  BeatSet beats;
  beats.source = "audio";
  if (mel.frames < 3) return beats;

  std::vector<double> onset(mel.frames, 0.0);
  double prev = 0.0;
  for (int t = 0; t < mel.frames; ++t) {
    double e = 0.0;
    for (int d = 0; d < mel.bands; ++d) e += mel.at(t, d);
    if (t > 0) onset[t] = std::max(0.0, e - prev);
    prev = e;
  }

  double mean, sd;
  mean_std(onset, mean, sd);
  const double threshold = mean + threshold_k * sd;

  for (int t = 1; t + 1 < mel.frames; ++t) {
    if (onset[t] > onset[t - 1] && onset[t] >= onset[t + 1] &&
        onset[t] >= threshold && onset[t] > 0.0)
      beats.timestamps.push_back(t * mel.frame_hop);
  }
  return beats;
}

BeatSet detect_audio_beats(const AudioSignal& signal,
                           const AudioBeatConfig& config) {
  const MelEnergy mel =
      mel_energy(signal, config.n_mels, config.win_ms, config.hop_ms);
  return detect_audio_beats_mel(mel, config.threshold_k);
}

std::vector<double> subset_velocity(const JointPositions& positions,
                                    const std::vector<int>& subset) {
  require(!subset.empty(), "subset_velocity: empty joint subset");
  const int t_count = positions.frames;
  require(t_count >= 2, "subset_velocity: need at least 2 frames");
  std::vector<double> v(t_count - 1, 0.0);
  for (int t = 0; t + 1 < t_count; ++t) {
    double acc = 0.0;
    for (int j : subset) {
      const double* a = positions.at(t, j);
      const double* b = positions.at(t + 1, j);
      for (int k = 0; k < 3; ++k) acc += (b[k] - a[k]) * (b[k] - a[k]);
    }
    v[t] = std::sqrt(acc);
  }
  return v;
}

std::vector<int> strict_minimum_indices(const std::vector<double>& velocity) {
  std::vector<int> idx;
  for (int i = 1; i + 1 < static_cast<int>(velocity.size()); ++i)
    if (velocity[i] < velocity[i - 1] && velocity[i] < velocity[i + 1])
      idx.push_back(i);
  return idx;
}

std::vector<int> smooth_peak_indices(const std::vector<double>& velocity,
                                     const SmoothBeatConfig& config) {
  const int n = static_cast<int>(velocity.size());
  const int w = config.window;
  require(w >= 1, "smooth_peak_indices: window must be >= 1");
  require(n >= 2 * w + 1, "smooth_peak_indices: sequence shorter than 2w+1");

  std::vector<double> inv(n);
  for (int i = 0; i < n; ++i) inv[i] = -velocity[i];

  double h_min = config.h_min;
  if (std::isnan(h_min)) {
    double mean, sd;
    mean_std(inv, mean, sd);
    h_min = mean + 0.5 * sd;
  }

  std::vector<int> idx;
  for (int i = w; i <= n - 1 - w; ++i) {
    if (inv[i] < h_min) continue;  // C1 (with C2, the window max is inv[i])
    bool ok = true;
    for (int j = i - w; j <= i + w && ok; ++j)  // C2: unique strict max
      if (j != i && inv[j] >= inv[i]) ok = false;
    for (int j = i - w; j < i && ok; ++j)  // C3 rising side
      if (inv[j] > inv[j + 1]) ok = false;
    for (int j = i; j < i + w && ok; ++j)  // C3 falling side
      if (inv[j] < inv[j + 1]) ok = false;
    if (ok) idx.push_back(i);
  }
  return idx;
}

namespace {

BeatSet velocity_beats(const MotionSequence& motion, const Skeleton& skeleton,
                       const std::vector<int>& subset,
                       const std::vector<int>& indices, const char* source) {
  (void)skeleton;
  (void)subset;
  BeatSet beats;
  beats.source = source;
  beats.timestamps.reserve(indices.size());
  for (int i : indices)
    beats.timestamps.push_back((i + 0.5) / motion.fps);  // v[i] spans i..i+1
  return beats;
}

}  // namespace

BeatSet detect_motion_beats_bc(const MotionSequence& motion,
                               const Skeleton& skeleton,
                               const std::vector<int>& subset) {
  require(motion.num_frames() >= 3, "detect_motion_beats_bc: need T >= 3");
  const auto joints = effective_subset(skeleton, subset);
  const auto positions = forward_kinematics(motion, skeleton);
  const auto v = subset_velocity(positions, joints);
  return velocity_beats(motion, skeleton, joints, strict_minimum_indices(v),
                        "motion-bc");
}

BeatSet detect_motion_beats_smooth(const MotionSequence& motion,
                                   const Skeleton& skeleton,
                                   const std::vector<int>& subset,
                                   const SmoothBeatConfig& config) {
  require(motion.num_frames() >= 2 * config.window + 2,
          "detect_motion_beats_smooth: need T >= 2w+2");
  const auto joints = effective_subset(skeleton, subset);
  const auto positions = forward_kinematics(motion, skeleton);
  const auto v = subset_velocity(positions, joints);
  return velocity_beats(motion, skeleton, joints,
                        smooth_peak_indices(v, config), "motion-smooth");
}

double beat_consistency(const BeatSet& motion_beats,
                        const BeatSet& audio_beats, double sigma) {
  require(sigma > 0.0, "beat_consistency: sigma must be positive");
  if (motion_beats.timestamps.empty()) return 0.0;
  if (audio_beats.timestamps.empty()) return 0.0;
  double acc = 0.0;
  for (double bg : motion_beats.timestamps) {
    double best = std::numeric_limits<double>::infinity();
    for (double ba : audio_beats.timestamps)
      best = std::min(best, (bg - ba) * (bg - ba));
    acc += std::exp(-best / (2.0 * sigma * sigma));
  }
  return acc / static_cast<double>(motion_beats.timestamps.size());
}

}  // namespace gg
