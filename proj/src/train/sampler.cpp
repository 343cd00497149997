#include "gg/sampler.hpp"

#include <cmath>

namespace gg {
namespace {

// Evenly spaced ascending sub-schedule ending at the last training step.
std::vector<int> ddim_timesteps(int train_steps, int infer_steps) {
  require(infer_steps >= 1 && infer_steps <= train_steps,
          "ddim: infer steps must be in [1, train steps]");
  std::vector<int> ts(infer_steps);
  for (int i = 0; i < infer_steps; ++i)
    ts[i] = static_cast<int>((static_cast<long>(i + 1) * train_steps) /
                             infer_steps) -
            1;
  return ts;
}

}  // namespace

Tensor ddim_sample_with_init(const DualStreamModel& model,
                             const Tensor& audio_features,
                             const NoiseSchedule& schedule, int infer_steps,
                             const Tensor& init_noise) {
  require(Tape::current() == nullptr,
          "ddim_sample: must not run under an active tape");
  const auto ts = ddim_timesteps(schedule.steps, infer_steps);
  Tensor x = init_noise.detach();

  for (int i = infer_steps - 1; i >= 0; --i) {
    const int t = ts[i];
    Tensor x0 = model.forward(audio_features, x, t);
    if (i == 0) return x0;

    const double ab_t = schedule.alpha_bar[t];
    const double ab_prev = schedule.alpha_bar[ts[i - 1]];
    const double c_t = std::sqrt(ab_t);
    const double c_noise = std::sqrt(1.0 - ab_t);
    const double d_t = std::sqrt(ab_prev);
    const double d_noise = std::sqrt(1.0 - ab_prev);

    Tensor next = Tensor::zeros(x.shape());
    for (size_t k = 0; k < x.size(); ++k) {
      const double eps_hat = (x.data()[k] - c_t * x0.data()[k]) / c_noise;
      next.mutable_data()[k] = d_t * x0.data()[k] + d_noise * eps_hat;
    }
    x = next;
  }
  return x;  // unreachable for infer_steps >= 1
}

Tensor ddim_sample(const DualStreamModel& model, const Tensor& audio_features,
                   const NoiseSchedule& schedule, int infer_steps, Rng& rng) {
  Tensor init = Tensor::randn({audio_features.rows(), kMotionDims}, rng);
  return ddim_sample_with_init(model, audio_features, schedule, infer_steps,
                               init);
}

Tensor generate_long(const DualStreamModel& model,
                     const Tensor& audio_features,
                     const NoiseSchedule& schedule, int infer_steps,
                     const SegmentPlan& plan, Rng& rng) {
  plan.validate();
  const int total = audio_features.rows();
  if (total <= plan.length)
    return ddim_sample(model, audio_features, schedule, infer_steps, rng);

  std::vector<int> starts;
  for (int s = 0;; s += plan.length - plan.overlap) {
    if (s + plan.length >= total) {
      starts.push_back(total - plan.length);
      break;
    }
    starts.push_back(s);
  }

  const auto ts = ddim_timesteps(schedule.steps, infer_steps);
  const double ab_start = schedule.alpha_bar[ts.back()];
  const double c_sig = std::sqrt(ab_start);
  const double c_noise = std::sqrt(1.0 - ab_start);

  Tensor out = Tensor::zeros({total, kMotionDims});
  int filled = 0;
  for (int start : starts) {
    Tensor seg_feat = slice_rows(audio_features, start, start + plan.length);
    Tensor init = Tensor::randn({plan.length, kMotionDims}, rng);

    const int overlap = std::min(filled - start, plan.length);
    for (int r = 0; r < overlap; ++r) {
      // Re-noise the already-generated frames to the starting step and use
      // them as the initial condition for the overlap region.
      double* row = init.mutable_data() + static_cast<size_t>(r) * kMotionDims;
      const double* prev =
          out.data() + static_cast<size_t>(start + r) * kMotionDims;
      for (int c = 0; c < kMotionDims; ++c)
        row[c] = c_sig * prev[c] + c_noise * row[c];
    }

    Tensor seg =
        ddim_sample_with_init(model, seg_feat, schedule, infer_steps, init);

    // Linear crossfade across the overlap: (prev, cur) weights run from
    // (1,0) at the first overlap frame to (0,1) at the last.
    for (int r = 0; r < overlap; ++r) {
      const double w = overlap == 1
                           ? 1.0
                           : static_cast<double>(r) / (overlap - 1);
      double* dst = out.mutable_data() +
                    static_cast<size_t>(start + r) * kMotionDims;
      const double* cur = seg.data() + static_cast<size_t>(r) * kMotionDims;
      for (int c = 0; c < kMotionDims; ++c)
        dst[c] = (1.0 - w) * dst[c] + w * cur[c];
    }
    for (int r = overlap; r < plan.length; ++r) {
      double* dst = out.mutable_data() +
                    static_cast<size_t>(start + r) * kMotionDims;
      const double* cur = seg.data() + static_cast<size_t>(r) * kMotionDims;
      std::copy(cur, cur + kMotionDims, dst);
    }
    filled = start + plan.length;
  }
  return out;
}

}  // namespace gg
