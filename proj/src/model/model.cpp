#include "gg/model.hpp"

#include <cmath>

#include <json.hpp>

namespace gg {

using nlohmann::json;

void AudioConfig::validate() const {
  require(n_mels >= 1, "audio config: n_mels must be >= 1");
  require(n_bins >= 2, "audio config: n_bins must be >= 2");
  require(n_bins <= 256, "audio config: n_bins must fit a byte");
  require(quant_window >= 1, "audio config: quant_window must be >= 1");
  require(win_ms > 0 && hop_ms > 0, "audio config: window/hop must be > 0");
}

void ModelConfig::validate() const {
  require(hidden >= 2 && hidden % 2 == 0, "model config: hidden must be even");
  require(heads >= 1 && hidden % heads == 0,
          "model config: hidden must be divisible by heads");
  require((hidden / heads) % 2 == 0,
          "model config: head dim must be even (rotary pairs)");
  require(dual_blocks >= 1 && fusion_blocks >= 1,
          "model config: need at least one dual and one fusion block");
  require(mlp_ratio >= 1, "model config: mlp_ratio must be >= 1");
  require(timesteps >= 2, "model config: timesteps must be >= 2");
}

std::string model_config_to_json(const ModelConfig& model,
                                 const AudioConfig& audio) {
  json j;
  j["model"] = {{"hidden", model.hidden},
                {"heads", model.heads},
                {"dual_blocks", model.dual_blocks},
                {"fusion_blocks", model.fusion_blocks},
                {"mlp_ratio", model.mlp_ratio},
                {"timesteps", model.timesteps},
                {"rope_base", model.rope_base}};
  j["audio"] = {{"n_mels", audio.n_mels},
                {"n_bins", audio.n_bins},
                {"quant_window", audio.quant_window},
                {"win_ms", audio.win_ms},
                {"hop_ms", audio.hop_ms}};
  return j.dump();
}

std::pair<ModelConfig, AudioConfig> model_config_from_json(
    const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("model config: invalid JSON: ") + e.what());
  }
  ModelConfig m;
  AudioConfig a;
  const json jm = j.value("model", json::object());
  const json ja = j.value("audio", json::object());
  m.hidden = jm.value("hidden", m.hidden);
  m.heads = jm.value("heads", m.heads);
  m.dual_blocks = jm.value("dual_blocks", m.dual_blocks);
  m.fusion_blocks = jm.value("fusion_blocks", m.fusion_blocks);
  m.mlp_ratio = jm.value("mlp_ratio", m.mlp_ratio);
  m.timesteps = jm.value("timesteps", m.timesteps);
  m.rope_base = jm.value("rope_base", m.rope_base);
  a.n_mels = ja.value("n_mels", a.n_mels);
  a.n_bins = ja.value("n_bins", a.n_bins);
  a.quant_window = ja.value("quant_window", a.quant_window);
  a.win_ms = ja.value("win_ms", a.win_ms);
  a.hop_ms = ja.value("hop_ms", a.hop_ms);
  m.validate();
  a.validate();
  return {m, a};
}

namespace {

Tensor init_linear(int fan_in, int fan_out, Rng& rng) {
  return Tensor::randn({fan_in, fan_out}, rng, 1.0 / std::sqrt(fan_in));
}

std::vector<int> iota_positions(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

}  // namespace

DualStreamModel::DualStreamModel(ModelConfig cfg, AudioConfig audio_cfg,
                                 Rng& rng)
    : cfg_(cfg), audio_cfg_(audio_cfg) {
  cfg_.validate();
  audio_cfg_.validate();
  const int h = cfg_.hidden;
  const int mlp = cfg_.mlp_ratio * h;

  embedder_.init(audio_cfg_.n_bins, audio_cfg_.n_mels, h, rng);
  embedder_.register_params(params_, "audio.embed");

  params_.add("in.audio.w", init_linear(h, h, rng));
  params_.add("in.audio.b", Tensor::zeros({h}));
  params_.add("in.motion.w", init_linear(kMotionDims, h, rng));
  params_.add("in.motion.b", Tensor::zeros({h}));

  params_.add("time.fc1.w", init_linear(h, h, rng));
  params_.add("time.fc1.b", Tensor::zeros({h}));
  params_.add("time.fc2.w", init_linear(h, h, rng));
  params_.add("time.fc2.b", Tensor::zeros({h}));

  for (int i = 0; i < cfg_.dual_blocks; ++i) {
    for (const char* m : {"a", "m"}) {
      const std::string p = "dual." + std::to_string(i) + "." + m;
      params_.add(p + ".mod.w", Tensor::zeros({h, 6 * h}));  // adaLN-zero
      params_.add(p + ".mod.b", Tensor::zeros({6 * h}));
      params_.add(p + ".qkv.w", init_linear(h, 3 * h, rng));
      params_.add(p + ".qkv.b", Tensor::zeros({3 * h}));
      params_.add(p + ".out.w", init_linear(h, h, rng));
      params_.add(p + ".out.b", Tensor::zeros({h}));
      params_.add(p + ".mlp1.w", init_linear(h, mlp, rng));
      params_.add(p + ".mlp1.b", Tensor::zeros({mlp}));
      params_.add(p + ".mlp2.w", init_linear(mlp, h, rng));
      params_.add(p + ".mlp2.b", Tensor::zeros({h}));
    }
  }
  for (int i = 0; i < cfg_.fusion_blocks; ++i) {
    const std::string p = "fusion." + std::to_string(i);
    params_.add(p + ".mod.w", Tensor::zeros({h, 3 * h}));
    params_.add(p + ".mod.b", Tensor::zeros({3 * h}));
    params_.add(p + ".fc1.w", init_linear(h, 3 * h + mlp, rng));
    params_.add(p + ".fc1.b", Tensor::zeros({3 * h + mlp}));
    params_.add(p + ".fc2.w", init_linear(h + mlp, h, rng));
    params_.add(p + ".fc2.b", Tensor::zeros({h}));
  }
  params_.add("final.mod.w", Tensor::zeros({h, 2 * h}));
  params_.add("final.mod.b", Tensor::zeros({2 * h}));
  params_.add("final.out.w", Tensor::zeros({h, kMotionDims}));
  params_.add("final.out.b", Tensor::zeros({kMotionDims}));
}

Tensor DualStreamModel::sinusoidal_embedding(int t, int dims) {
  require(dims >= 2 && dims % 2 == 0,
          "sinusoidal_embedding: dims must be even");
  const int half = dims / 2;
  Tensor out = Tensor::zeros({1, dims});
  double* v = out.mutable_data();
  for (int i = 0; i < half; ++i) {
    const double freq = std::exp(-std::log(10000.0) * i / half);
    v[i] = std::sin(t * freq);
    v[half + i] = std::cos(t * freq);
  }
  return out;
}

Tensor DualStreamModel::timestep_embedding(int t) const {
  require(t >= 0 && t < cfg_.timesteps,
          "timestep_embedding: t=" + std::to_string(t) + " out of range [0," +
              std::to_string(cfg_.timesteps) + ")");
  Tensor base = sinusoidal_embedding(t, cfg_.hidden);
  Tensor h = silu(linear(base, params_.get("time.fc1.w"),
                         params_.get("time.fc1.b")));
  return linear(h, params_.get("time.fc2.w"), params_.get("time.fc2.b"));
}

Tensor DualStreamModel::embed_audio(const QuantizedTokens& tokens,
                                    int motion_frames,
                                    double motion_fps) const {
  const auto map = resample_frame_map(motion_frames, motion_fps,
                                      tokens.frames, audio_cfg_.audio_fps());
  return embedder_.forward(tokens, map);
}

Tensor DualStreamModel::modulation(const std::string& prefix,
                                   const Tensor& t_emb, int n_vectors) const {
  Tensor raw = linear(silu(t_emb), params_.get(prefix + ".mod.w"),
                      params_.get(prefix + ".mod.b"));
  (void)n_vectors;
  return raw;  // [1, n_vectors*hidden]; callers slice
}

std::vector<Tensor> DualStreamModel::attention_heads(
    const Tensor& q, const Tensor& k, const Tensor& v,
    const std::vector<int>& positions) const {
  const int dh = cfg_.head_dim();
  std::vector<Tensor> outs;
  outs.reserve(cfg_.heads);
  const double att_scale = 1.0 / std::sqrt(static_cast<double>(dh));
  for (int hd = 0; hd < cfg_.heads; ++hd) {
    Tensor qh = rope(rms_norm(slice_cols(q, hd * dh, (hd + 1) * dh)),
                     positions, cfg_.rope_base);
    Tensor kh = rope(rms_norm(slice_cols(k, hd * dh, (hd + 1) * dh)),
                     positions, cfg_.rope_base);
    Tensor vh = slice_cols(v, hd * dh, (hd + 1) * dh);
    Tensor logits = scale(matmul(qh, transpose(kh)), att_scale);
    outs.push_back(matmul(softmax_rows(logits), vh));
  }
  return outs;
}

std::pair<Tensor, Tensor> DualStreamModel::dual_block(
    int index, const Tensor& x_audio, const Tensor& x_motion,
    const Tensor& t_emb) const {
  const int h = cfg_.hidden;
  const int dh = cfg_.head_dim();
  const int t_a = x_audio.rows(), t_m = x_motion.rows();
  const double att_scale = 1.0 / std::sqrt(static_cast<double>(dh));

  struct Stream {
    Tensor x;
    Tensor a1, b1, g1, a2, b2, g2;  // modulation vectors [1,h]
    Tensor q, k, v;
    std::string prefix;
    std::vector<int> positions;
  };
  Stream streams[2];
  streams[0].x = x_audio;
  streams[1].x = x_motion;
  streams[0].prefix = "dual." + std::to_string(index) + ".a";
  streams[1].prefix = "dual." + std::to_string(index) + ".m";
  streams[0].positions = iota_positions(t_a);
  streams[1].positions = iota_positions(t_m);

  // Per-modality modulated norm and QKV projection.
  for (Stream& s : streams) {
    Tensor mod = modulation(s.prefix, t_emb, 6);
    s.a1 = slice_cols(mod, 0, h);
    s.b1 = slice_cols(mod, h, 2 * h);
    s.g1 = slice_cols(mod, 2 * h, 3 * h);
    s.a2 = slice_cols(mod, 3 * h, 4 * h);
    s.b2 = slice_cols(mod, 4 * h, 5 * h);
    s.g2 = slice_cols(mod, 5 * h, 6 * h);

    Tensor xhat = add_rowvec(
        mul_rowvec(layer_norm(s.x), add_scalar(s.a1, 1.0)), s.b1);
    Tensor qkv = linear(xhat, params_.get(s.prefix + ".qkv.w"),
                        params_.get(s.prefix + ".qkv.b"));
    s.q = slice_cols(qkv, 0, h);
    s.k = slice_cols(qkv, h, 2 * h);
    s.v = slice_cols(qkv, 2 * h, 3 * h);
  }

  // Joint attention over the concatenated token axis, head by head.
  std::vector<Tensor> heads;
  heads.reserve(cfg_.heads);
  for (int hd = 0; hd < cfg_.heads; ++hd) {
    std::vector<Tensor> qs, ks, vs;
    for (Stream& s : streams) {
      qs.push_back(rope(rms_norm(slice_cols(s.q, hd * dh, (hd + 1) * dh)),
                        s.positions, cfg_.rope_base));
      ks.push_back(rope(rms_norm(slice_cols(s.k, hd * dh, (hd + 1) * dh)),
                        s.positions, cfg_.rope_base));
      vs.push_back(slice_cols(s.v, hd * dh, (hd + 1) * dh));
    }
    Tensor qj = concat_rows(qs), kj = concat_rows(ks), vj = concat_rows(vs);
    Tensor logits = scale(matmul(qj, transpose(kj)), att_scale);
    heads.push_back(matmul(softmax_rows(logits), vj));
  }
  Tensor joint = concat_cols(heads);
  Tensor att[2] = {slice_rows(joint, 0, t_a),
                   slice_rows(joint, t_a, t_a + t_m)};

  // Gated residuals: attention projection, then modulated MLP.
  Tensor out[2];
  for (int i = 0; i < 2; ++i) {
    Stream& s = streams[i];
    Tensor proj = linear(att[i], params_.get(s.prefix + ".out.w"),
                         params_.get(s.prefix + ".out.b"));
    Tensor x = add(s.x, mul_rowvec(proj, s.g1));
    Tensor hmod = add_rowvec(
        mul_rowvec(layer_norm(x), add_scalar(s.a2, 1.0)), s.b2);
    Tensor mlp = linear(gelu(linear(hmod, params_.get(s.prefix + ".mlp1.w"),
                                    params_.get(s.prefix + ".mlp1.b"))),
                        params_.get(s.prefix + ".mlp2.w"),
                        params_.get(s.prefix + ".mlp2.b"));
    out[i] = add(x, mul_rowvec(mlp, s.g2));
  }
  return {out[0], out[1]};
}

Tensor DualStreamModel::fusion_block(int index, const Tensor& x_cat,
                                     int audio_tokens,
                                     const Tensor& t_emb) const {
  const int h = cfg_.hidden;
  const int mlp = cfg_.mlp_ratio * h;
  const int t_total = x_cat.rows();
  require(audio_tokens >= 0 && audio_tokens <= t_total,
          "fusion_block: bad audio token count");
  const std::string p = "fusion." + std::to_string(index);

  Tensor mod = modulation(p, t_emb, 3);
  Tensor af = slice_cols(mod, 0, h);
  Tensor bf = slice_cols(mod, h, 2 * h);
  Tensor gf = slice_cols(mod, 2 * h, 3 * h);

  Tensor xmod = add_rowvec(
      mul_rowvec(layer_norm(x_cat), add_scalar(af, 1.0)), bf);

  // One linear produces attention QKV and the MLP branch together.
  Tensor fused = linear(xmod, params_.get(p + ".fc1.w"),
                        params_.get(p + ".fc1.b"));
  Tensor q = slice_cols(fused, 0, h);
  Tensor k = slice_cols(fused, h, 2 * h);
  Tensor v = slice_cols(fused, 2 * h, 3 * h);
  Tensor m_feat = slice_cols(fused, 3 * h, 3 * h + mlp);

  // Audio frame k and motion frame k share a rotary phase.
  std::vector<int> positions(t_total);
  for (int i = 0; i < t_total; ++i)
    positions[i] = i < audio_tokens ? i : i - audio_tokens;

  Tensor att = concat_cols(attention_heads(q, k, v, positions));
  Tensor m_act = gelu(m_feat);
  Tensor combined = linear(concat_cols({att, m_act}),
                           params_.get(p + ".fc2.w"), params_.get(p + ".fc2.b"));
  return add(x_cat, mul_rowvec(combined, gf));
}

Tensor DualStreamModel::forward(const Tensor& audio_features,
                                const Tensor& m_t, int t) const {
  require(audio_features.ndim() == 2 && audio_features.cols() == cfg_.hidden,
          "forward: audio features must be [T," + std::to_string(cfg_.hidden) +
              "], got " + shape_str(audio_features.shape()));
  require(m_t.ndim() == 2 && m_t.cols() == kMotionDims,
          "forward: motion must be [T," + std::to_string(kMotionDims) +
              "], got " + shape_str(m_t.shape()));
  require(audio_features.rows() == m_t.rows(),
          "forward: audio/motion length mismatch (" +
              std::to_string(audio_features.rows()) + " audio vs " +
              std::to_string(m_t.rows()) + " motion frames)");
  const int h = cfg_.hidden;
  const int t_tok = m_t.rows();

  Tensor t_emb = timestep_embedding(t);
  Tensor xa = linear(audio_features, params_.get("in.audio.w"),
                     params_.get("in.audio.b"));
  Tensor xm = linear(m_t, params_.get("in.motion.w"),
                     params_.get("in.motion.b"));

  for (int i = 0; i < cfg_.dual_blocks; ++i)
    std::tie(xa, xm) = dual_block(i, xa, xm, t_emb);

  Tensor xcat = concat_rows({xa, xm});
  for (int i = 0; i < cfg_.fusion_blocks; ++i)
    xcat = fusion_block(i, xcat, t_tok, t_emb);

  Tensor xm_out = slice_rows(xcat, t_tok, 2 * t_tok);
  Tensor mod = modulation("final", t_emb, 2);
  Tensor alpha = slice_cols(mod, 0, h);
  Tensor beta = slice_cols(mod, h, 2 * h);
  Tensor hfin = add_rowvec(
      mul_rowvec(layer_norm(xm_out), add_scalar(alpha, 1.0)), beta);
  return linear(hfin, params_.get("final.out.w"), params_.get("final.out.b"));
}

}  // namespace gg
