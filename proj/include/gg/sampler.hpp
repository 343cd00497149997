#pragma once

#include "gg/model.hpp"
#include "gg/schedule.hpp"

namespace gg {

// Deterministic DDIM (eta=0) re-derived for x0 prediction: at each of the
// evenly spaced steps, x0_hat = model output,
//   eps_hat = (m_t - sqrt(ab_t)*x0_hat) / sqrt(1-ab_t)
//   m_prev  = sqrt(ab_prev)*x0_hat + sqrt(1-ab_prev)*eps_hat
// and the final step returns x0_hat directly. Works in normalized space.
Tensor ddim_sample_with_init(const DualStreamModel& model,
                             const Tensor& audio_features,
                             const NoiseSchedule& schedule, int infer_steps,
                             const Tensor& init_noise);

Tensor ddim_sample(const DualStreamModel& model, const Tensor& audio_features,
                   const NoiseSchedule& schedule, int infer_steps, Rng& rng);

struct SegmentPlan {
  int length = 320;
  int overlap = 80;
  void validate() const {
    require(length >= 2 && 0 < overlap && overlap < length,
            "segment plan: need 0 < overlap < length");
  }
};

// Segment-based long generation: fixed-length windows with linear crossfade
// in the overlaps; each new segment is initialized in the overlap region by
// re-noising the previous segment's tail to the starting step (inpainting
// style context). Sequences that fit one segment fall back to ddim_sample.
Tensor generate_long(const DualStreamModel& model,
                     const Tensor& audio_features,
                     const NoiseSchedule& schedule, int infer_steps,
                     const SegmentPlan& plan, Rng& rng);

}  // namespace gg
