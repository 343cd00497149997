#pragma once

#include <vector>

#include "gg/audio.hpp"
#include "gg/rng.hpp"

namespace gg {

// T x D nonnegative mel-energy frames. After normalize01/augment_mel the
// values live in [0, 1].
struct MelEnergy {
  int frames = 0;
  int bands = 0;
  double frame_hop = 0.0;  // seconds
  std::vector<double> values;  // row-major frames x bands

  double& at(int t, int d) { return values[static_cast<size_t>(t) * bands + d]; }
  double at(int t, int d) const {
    return values[static_cast<size_t>(t) * bands + d];
  }
};

// Log-mel over a 25 ms window with 10 ms hop (HTK triangular filters,
// 0 Hz..Nyquist), then exponential transform and magnitude, yielding a
// nonnegative mel-energy matrix. Frame count is floor((len-win)/hop)+1.
MelEnergy mel_energy(const AudioSignal& signal, int n_mels = 40,
                     double win_ms = 25.0, double hop_ms = 10.0);

struct AugmentParams {
  double amplitude = 0.0;  // A ~ U(0,4)
  double phase = 0.0;      // phi ~ U(0,2pi)
  double period = 300.0;   // f_r ~ U(150,1200), in frames
  double threshold_frac = 0.1;
};

AugmentParams sample_augment_params(Rng& rng);

// Training-time low-frequency noise augmentation:
//   n(t) = A*sin(2*pi*t/f_r + phi)
//   x'   = max(x_thresh, x+n)  where x > x_thresh, else x+n,
//          with x_thresh = min(x) + 0.1*(max(x)-min(x))
//   out  = clamp((x' - min(x)) / (max(x) - min(x)), 0, 1)
// min/max are taken over the whole clip by default (per_band switches to
// per-band statistics). A constant input (max == min) yields zeros.
MelEnergy augment_mel_with(const MelEnergy& mel, const AugmentParams& params,
                           bool per_band = false);
MelEnergy augment_mel(const MelEnergy& mel, Rng& rng, bool per_band = false);

// Inference-path normalization: the same min-max mapping to [0,1] without
// the noise/threshold step.
MelEnergy normalize01(const MelEnergy& mel, bool per_band = false);

}  // namespace gg
