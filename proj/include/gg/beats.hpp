#pragma once

#include <string>
#include <vector>

#include "gg/audio.hpp"
#include "gg/fk.hpp"
#include "gg/mel.hpp"

namespace gg {

struct BeatSet {
  std::vector<double> timestamps;  // seconds, strictly increasing
  std::string source;
};

struct AudioBeatConfig {
  int n_mels = 40;
  double win_ms = 25.0;
  double hop_ms = 10.0;
  double threshold_k = 1.5;  // adaptive threshold = mean + k*std of onsets
};

// Speech onsets: positive half-wave rectified frame-to-frame increase of the
// summed mel energy, peak-picked above an adaptive (scale-free) threshold.
BeatSet detect_audio_beats(const AudioSignal& signal,
                           const AudioBeatConfig& config = {});
BeatSet detect_audio_beats_mel(const MelEnergy& mel, double threshold_k = 1.5);

// Stacked L2 frame-to-frame displacement of the selected joints;
// v[t] spans frames t..t+1. Empty subset selects the skeleton's upper body.
std::vector<double> subset_velocity(const JointPositions& positions,
                                    const std::vector<int>& subset);

// Velocity indices of all strict local minima (the permissive BC detector).
std::vector<int> strict_minimum_indices(const std::vector<double>& velocity);

struct SmoothBeatConfig {
  int window = 5;  // local window radius w
  // Minimum peak height on inverted velocity; NaN selects the adaptive
  // default mean(-v) + 0.5*std(-v).
  double h_min = std::numeric_limits<double>::quiet_NaN();
};

// Peak picking on inverted velocity with slope constraints. Index i (with
// w <= i <= n-1-w) is kept iff, over the symmetric window [i-w, i+w]:
//   C1: the window max is >= h_min,
//   C2: -v[i] is the unique window max (strict), and
//   C3: -v is nondecreasing on [i-w, i] and nonincreasing on [i, i+w].
// Strict C2 makes every detection a strict minimum of v, and w=1 with
// h_min=-inf degenerates to exactly the strict-minima detector.
std::vector<int> smooth_peak_indices(const std::vector<double>& velocity,
                                     const SmoothBeatConfig& config);

BeatSet detect_motion_beats_bc(const MotionSequence& motion,
                               const Skeleton& skeleton,
                               const std::vector<int>& subset = {});
BeatSet detect_motion_beats_smooth(const MotionSequence& motion,
                                   const Skeleton& skeleton,
                                   const std::vector<int>& subset = {},
                                   const SmoothBeatConfig& config = {});

// BC = mean over motion beats of exp(-min_a ||b_g - b_a||^2 / (2 sigma^2)).
// Empty motion beats, or motion beats with no audio beats, score 0.
double beat_consistency(const BeatSet& motion_beats, const BeatSet& audio_beats,
                        double sigma = 0.1);

}  // namespace gg
