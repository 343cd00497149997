#pragma once

#include <string>
#include <vector>

#include "gg/beats.hpp"
#include "gg/fgd.hpp"

namespace gg {

// Mean over frames and joints of the fps^3-scaled third-difference (jerk)
// magnitude; T >= 4.
double jitter_metric(const JointPositions& positions, double fps);

struct FootSlidingResult {
  double value = 0.0;
  bool no_contact = false;  // ground truth never in contact
};

// Mean predicted foot displacement over the frames where the ground-truth
// feet move less than thr (stacked norm over the skeleton's foot joints).
FootSlidingResult foot_sliding(const JointPositions& pred,
                               const JointPositions& gt,
                               const Skeleton& skeleton, double thr = 1e-2);

// Mean L1 distance between all ordered frame pairs of the flattened joint
// positions, 1/(2N(N-1)) * sum_l sum_j ||p_l - p_j||_1. Positions must be
// computed with zero root translation.
double intra_diversity(const JointPositions& positions);

// 1/(N*ceil(N/2)) * sum_{a<b} mean-abs(M_a - M_b) over raw motion frames.
double inter_diversity(const std::vector<MotionSequence>& samples);

struct EvalConfig {
  double bc_sigma = 0.1;
  SmoothBeatConfig smooth;
  AudioBeatConfig audio_beats;
  int fgd_window = 30;
  double foot_thr = 1e-2;
  std::vector<int> joint_subset;  // empty -> skeleton upper body
};

struct MetricValue {
  double raw = 0.0;
  double scaled = 0.0;
};

struct MetricReport {
  MetricValue fgd, bc, smooth_bc, intra_diversity, jitter, foot_sliding,
      inter_diversity;
  bool foot_no_contact = false;
  bool inter_available = false;
  int num_samples = 0;
  int audio_beat_count = 0;
  double bc_beat_count = 0.0;      // mean over samples
  double smooth_beat_count = 0.0;  // mean over samples
};

// Reporting scale factors: FGD, BC, Smooth-BC x1e-1; Jitter x1e2;
// Foot-Sliding, Inter-Diversity x1e-2; Intra-Diversity unscaled.
MetricReport evaluate(const std::vector<MotionSequence>& pred_samples,
                      const MotionSequence& gt, const AudioSignal& audio,
                      const Skeleton& skeleton, const EvalConfig& config = {});

std::string report_to_json(const MetricReport& report);
std::string report_table(const MetricReport& report);

}  // namespace gg
