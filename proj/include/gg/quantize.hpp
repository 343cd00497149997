#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gg/mel.hpp"
#include "gg/rng.hpp"

namespace gg {

enum class QuantizeMode { kTrain, kInfer };

struct QuantizedTokens {
  int frames = 0;
  int bands = 0;
  int n_bins = 0;
  int window = 0;
  int offset = 0;  // the offset s actually used
  std::vector<uint8_t> tokens;  // row-major frames x bands, values < n_bins

  uint8_t at(int t, int d) const {
    return tokens[static_cast<size_t>(t) * bands + d];
  }
};

// Three-stage temporal quantization of features in [0,1]^{T x D}:
//   1. downsample with offset s (random in [0,w-1] for train, floor(w/2) for
//      infer): v_down = v[s::w]
//   2. upsample by repeating each frame w times, truncated/extended to T
//      (a nonzero offset underfills the tail; the last frame is held)
//   3. bin: n_bins==2 -> indicator(v > 0.05), else
//      clamp(floor(v*n_bins), 0, n_bins-1)
QuantizedTokens temporal_quantize(const MelEnergy& features, int window,
                                  int n_bins, QuantizeMode mode,
                                  Rng* rng = nullptr);

// Token file: magic "QMEL", u32 T, u32 D, u32 n_bins, then T*D token bytes.
void save_tokens(const std::string& path, const QuantizedTokens& tokens);
QuantizedTokens load_tokens(const std::string& path);
std::string tokens_debug_json(const QuantizedTokens& tokens);

}  // namespace gg
