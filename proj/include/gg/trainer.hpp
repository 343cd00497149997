#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gg/losses.hpp"
#include "gg/model.hpp"
#include "gg/quantize.hpp"

namespace gg {

struct TrainSetup {
  ModelConfig model;
  AudioConfig audio;
  int schedule_steps = 1000;
  double beta_start = 1e-4;
  double beta_end = 2e-2;
  LossWeights weights;
  double lr = 1e-4;
  double weight_decay = 0.0;
  int batch_size = 4;
  uint64_t seed = 1;
};

struct TrainPair {
  MelEnergy mel;          // raw mel energy; augmented per step
  MotionSequence motion;  // ground truth
};

// Owns the model, schedule, stats and optimizer; one step() = one AdamW
// update over batch_size (audio, motion) draws with fresh augmentation,
// quantization offsets, timesteps and noise.
class Trainer {
 public:
  Trainer(TrainSetup setup, std::vector<TrainPair> pairs, Skeleton skeleton);

  LossValues step();

  DualStreamModel& model() { return *model_; }
  const DualStreamModel& model() const { return *model_; }
  const NormStats& stats() const { return stats_; }
  const NoiseSchedule& schedule() const { return schedule_; }
  const Skeleton& skeleton() const { return skeleton_; }
  AdamW& optimizer() { return opt_; }
  Rng& rng() { return rng_; }
  const TrainSetup& setup() const { return setup_; }
  double motion_fps() const { return pairs_.empty() ? 30.0 : pairs_[0].motion.fps; }

 private:
  TrainSetup setup_;
  std::vector<TrainPair> pairs_;
  Skeleton skeleton_;
  std::unique_ptr<DualStreamModel> model_;
  NormStats stats_;
  NoiseSchedule schedule_;
  AdamW opt_;
  Rng rng_;
  std::vector<Tensor> norm_frames_;  // cached per-pair normalized targets
  size_t cursor_ = 0;
};

}  // namespace gg
