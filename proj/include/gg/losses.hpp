#pragma once

#include <cstdint>
#include <vector>

#include "gg/motion.hpp"
#include "gg/motion_ops.hpp"

namespace gg {

struct LossWeights {
  double rot6d = 1.0;
  double trans = 1.0;
  double jitter = 1e-9;
};

struct LossValues {
  double total = 0.0, rot6d = 0.0, trans = 0.0, jitter = 0.0;
};

struct LossTerms {
  Tensor total, rot6d, trans, jitter;
  LossValues values() const {
    return {total.item(), rot6d.item(), trans.item(), jitter.item()};
  }
};

// Mask-weighted mean over frames of per-frame MSE / dimension count.
Tensor loss_rot6d(const Tensor& pred_rot, const Tensor& gt_rot,
                  const std::vector<uint8_t>& mask);
Tensor loss_trans(const Tensor& pred_trans, const Tensor& gt_trans,
                  const std::vector<uint8_t>& mask);

// FK positions -> per-(frame,joint) jerk magnitude scaled by fps^3 via the
// third difference P[t+3]-3P[t+2]+3P[t+1]-P[t], then the masked mean of the
// per-frame mean-over-joints squared difference between pred and gt.
Tensor loss_jitter(const Tensor& pred_motion, const Tensor& gt_motion,
                   const Skeleton& skeleton, const std::vector<uint8_t>& mask,
                   double fps);

// lambda_rot6d*L_rot6d + lambda_trans*L_trans + lambda_jitter*L_jitter over
// full [T,333] motion in original (denormalized) space.
LossTerms total_loss(const Tensor& pred_motion, const Tensor& gt_motion,
                     const Skeleton& skeleton,
                     const std::vector<uint8_t>& mask, double fps,
                     const LossWeights& weights);

// Differentiable FK of a full [T,333] motion tensor; positions [T, J*3].
Tensor motion_positions(const Tensor& motion, const Skeleton& skeleton);

}  // namespace gg
