#include "gg/audio_embed.hpp"

#include <cmath>

namespace gg {

std::vector<int> resample_frame_map(int motion_frames, double motion_fps,
                                    int audio_frames, double audio_fps) {
  require(motion_frames > 0 && audio_frames > 0,
          "resample_frame_map: frame counts must be positive");
  require(motion_fps > 0 && audio_fps > 0,
          "resample_frame_map: frame rates must be positive");
  std::vector<int> map(motion_frames);
  for (int k = 0; k < motion_frames; ++k) {
    int idx = static_cast<int>(std::lround(k * audio_fps / motion_fps));
    map[k] = std::min(idx, audio_frames - 1);
  }
  return map;
}

void AudioEmbedder::init(int n_bins_in, int bands_in, int hidden_in,
                         Rng& rng) {
  n_bins = n_bins_in;
  bands = bands_in;
  hidden = hidden_in;
  table = Tensor::randn({n_bins * bands, hidden}, rng, 0.02);
  proj_w = Tensor::randn({hidden, hidden}, rng, 1.0 / std::sqrt(hidden));
  proj_b = Tensor::zeros({hidden});
}

void AudioEmbedder::register_params(ParamStore& store,
                                    const std::string& prefix) {
  store.add(prefix + ".table", table);
  store.add(prefix + ".proj_w", proj_w);
  store.add(prefix + ".proj_b", proj_b);
}

Tensor AudioEmbedder::forward(const QuantizedTokens& tokens,
                              const std::vector<int>& frame_map) const {
  require(tokens.bands == bands,
          "AudioEmbedder: token band count " + std::to_string(tokens.bands) +
              " vs embedder " + std::to_string(bands));
  require(tokens.n_bins == n_bins,
          "AudioEmbedder: token n_bins " + std::to_string(tokens.n_bins) +
              " vs embedder " + std::to_string(n_bins));
  const int t_out = static_cast<int>(frame_map.size());
  require(t_out > 0, "AudioEmbedder: empty frame map");

  Tensor summed;
  std::vector<int> ids(t_out);
  for (int d = 0; d < bands; ++d) {
    for (int k = 0; k < t_out; ++k) {
      const int src = frame_map[k];
      require(src >= 0 && src < tokens.frames,
              "AudioEmbedder: frame map index out of range");
      const int tok = tokens.at(src, d);
      require(tok < n_bins, "AudioEmbedder: token " + std::to_string(tok) +
                                " out of range [0," + std::to_string(n_bins) +
                                ")");
      ids[k] = d * n_bins + tok;
    }
    Tensor rows = embed_lookup(table, ids);
    summed = d == 0 ? rows : add(summed, rows);
  }
  return linear(summed, proj_w, proj_b);
}

}  // namespace gg
