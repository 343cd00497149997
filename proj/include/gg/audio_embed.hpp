#pragma once

#include <vector>

#include "gg/optim.hpp"
#include "gg/ops.hpp"
#include "gg/quantize.hpp"

namespace gg {

// Nearest-frame index map from motion frames to audio token frames.
// Motion frame k selects token frame round(k * audio_fps / motion_fps),
// clamped to the valid range.
std::vector<int> resample_frame_map(int motion_frames, double motion_fps,
                                    int audio_frames, double audio_fps);

// Learned embedder for quantized mel tokens: one table row per (band, bin)
// pair, summed over bands, then a linear projection to the hidden size.
struct AudioEmbedder {
  int n_bins = 0;
  int bands = 0;
  int hidden = 0;
  Tensor table;   // [n_bins*bands, hidden]
  Tensor proj_w;  // [hidden, hidden]
  Tensor proj_b;  // [hidden]

  void init(int n_bins_in, int bands_in, int hidden_in, Rng& rng);
  void register_params(ParamStore& store, const std::string& prefix);

  // tokens resampled through frame_map; output [len(frame_map), hidden]
  Tensor forward(const QuantizedTokens& tokens,
                 const std::vector<int>& frame_map) const;
};

}  // namespace gg
