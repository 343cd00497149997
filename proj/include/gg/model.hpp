#pragma once

#include <string>
#include <utility>

#include "gg/audio_embed.hpp"
#include "gg/motion.hpp"
#include "gg/optim.hpp"

namespace gg {

struct AudioConfig {
  int n_mels = 40;
  int n_bins = 8;
  int quant_window = 8;
  double win_ms = 25.0;
  double hop_ms = 10.0;

  double audio_fps() const { return 1000.0 / hop_ms; }
  void validate() const;
};

struct ModelConfig {
  int hidden = 256;
  int heads = 4;
  int dual_blocks = 4;
  int fusion_blocks = 2;
  int mlp_ratio = 4;
  int timesteps = 1000;
  double rope_base = 10000.0;

  int head_dim() const { return hidden / heads; }
  void validate() const;
};

std::string model_config_to_json(const ModelConfig& model,
                                 const AudioConfig& audio);
std::pair<ModelConfig, AudioConfig> model_config_from_json(
    const std::string& json_text);

// Denoiser: dual-stream blocks with per-modality adaLN modulation and joint
// cross-modal attention, then fusion blocks over the concatenated streams,
// then a modulated projection of the motion slice back to 333 dims. The
// network predicts clean normalized motion (x0).
//
// Modulation heads and the final projection are zero-initialized, so a fresh
// model is the identity on tokens and outputs exactly zero.
class DualStreamModel {
 public:
  DualStreamModel(ModelConfig cfg, AudioConfig audio_cfg, Rng& rng);

  const ModelConfig& config() const { return cfg_; }
  const AudioConfig& audio_config() const { return audio_cfg_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }
  const AudioEmbedder& embedder() const { return embedder_; }

  // Sinusoidal base (first half sin, second half cos), before the MLP.
  static Tensor sinusoidal_embedding(int t, int dims);
  Tensor timestep_embedding(int t) const;  // [1, hidden]

  Tensor embed_audio(const QuantizedTokens& tokens, int motion_frames,
                     double motion_fps) const;

  // Exposed individually for the attention-equivalence oracles.
  std::pair<Tensor, Tensor> dual_block(int index, const Tensor& x_audio,
                                       const Tensor& x_motion,
                                       const Tensor& t_emb) const;
  Tensor fusion_block(int index, const Tensor& x_cat, int audio_tokens,
                      const Tensor& t_emb) const;

  // audio_features [T,H] and noisy motion m_t [T,333] -> predicted m0^norm.
  Tensor forward(const Tensor& audio_features, const Tensor& m_t,
                 int t) const;

 private:
  Tensor modulation(const std::string& prefix, const Tensor& t_emb,
                    int n_vectors) const;
  std::vector<Tensor> attention_heads(const Tensor& q, const Tensor& k,
                                      const Tensor& v,
                                      const std::vector<int>& positions) const;

  ModelConfig cfg_;
  AudioConfig audio_cfg_;
  ParamStore params_;
  AudioEmbedder embedder_;
};

}  // namespace gg
