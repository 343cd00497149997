#include <doctest.h>

#include <cstring>
#include <filesystem>

#include "gg/audio_embed.hpp"
#include "gg/quantize.hpp"

using namespace gg;

namespace {

MelEnergy make_features(int frames, int bands, std::vector<double> values) {
  MelEnergy mel;
  mel.frames = frames;
  mel.bands = bands;
  mel.frame_hop = 0.01;
  mel.values = std::move(values);
  return mel;
}

MelEnergy random01(Rng& rng, int frames, int bands) {
  MelEnergy mel;
  mel.frames = frames;
  mel.bands = bands;
  mel.frame_hop = 0.01;
  mel.values.resize(static_cast<size_t>(frames) * bands);
  for (auto& v : mel.values) v = uniform(rng);
  return mel;
}

}  // namespace

TEST_SUITE_BEGIN("quantize");

TEST_CASE("constant 0.5 with 10 bins maps to floor(0.5*10) = 5 everywhere") {
  MelEnergy mel = make_features(8, 2, std::vector<double>(16, 0.5));
  QuantizedTokens q =
      temporal_quantize(mel, 4, 10, QuantizeMode::kInfer);
  for (uint8_t t : q.tokens) CHECK(t == 5);
}

TEST_CASE("value exactly 1.0 clamps to the top bin") {
  MelEnergy mel = make_features(4, 1, {1.0, 1.0, 1.0, 1.0});
  QuantizedTokens q = temporal_quantize(mel, 2, 10, QuantizeMode::kInfer);
  for (uint8_t t : q.tokens) CHECK(t == 9);
}

TEST_CASE("hand-traced example: w=2 infer, binary bins") {
  // v = [0.0,0.2,0.9,0.1,0.8], s = 1 -> v_down = [0.2, 0.1]; upsample with
  // held tail -> [0.2,0.2,0.1,0.1,0.1]; all values > 0.05 -> ones.
  MelEnergy mel = make_features(5, 1, {0.0, 0.2, 0.9, 0.1, 0.8});
  QuantizedTokens q = temporal_quantize(mel, 2, 2, QuantizeMode::kInfer);
  CHECK(q.offset == 1);
  for (uint8_t t : q.tokens) CHECK(t == 1);
}

TEST_CASE("binary mode thresholds at 0.05") {
  MelEnergy mel = make_features(4, 1, {0.0, 0.04, 0.05, 0.06});
  QuantizedTokens q = temporal_quantize(mel, 1, 2, QuantizeMode::kInfer);
  CHECK(q.tokens[0] == 0);
  CHECK(q.tokens[1] == 0);
  CHECK(q.tokens[2] == 0);  // strict inequality
  CHECK(q.tokens[3] == 1);
}

TEST_CASE("piecewise constancy within each window, both modes") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int frames = uniform_int(rng, 9, 60);
    const int bands = uniform_int(rng, 1, 5);
    const int w = uniform_int(rng, 1, 8);
    MelEnergy mel = random01(rng, frames, bands);
    const bool train = trial % 2 == 0;
    QuantizedTokens q = temporal_quantize(
        mel, w, 8, train ? QuantizeMode::kTrain : QuantizeMode::kInfer,
        train ? &rng : nullptr);
    for (int t = 0; t < frames; ++t)
      for (int d = 0; d < bands; ++d)
        CHECK(q.at(t, d) == q.at((t / w) * w, d));
  }
}

TEST_CASE("infer-mode quantization is idempotent") {
  Rng rng(78);
  for (int trial = 0; trial < 50; ++trial) {
    const int frames = uniform_int(rng, 9, 40);
    const int n_bins = uniform_int(rng, 2, 12);
    const int w = uniform_int(rng, 1, 6);
    MelEnergy mel = random01(rng, frames, 3);
    QuantizedTokens q1 = temporal_quantize(mel, w, n_bins, QuantizeMode::kInfer);

    MelEnergy as_values = mel;
    for (int t = 0; t < frames; ++t)
      for (int d = 0; d < 3; ++d)
        as_values.at(t, d) =
            static_cast<double>(q1.at(t, d)) / (n_bins - 1);
    QuantizedTokens q2 =
        temporal_quantize(as_values, w, n_bins, QuantizeMode::kInfer);
    CHECK(q2.tokens == q1.tokens);
  }
}

TEST_CASE("train mode: fixed seed reproduces, offsets cover [0,w)") {
  Rng rng1(5), rng2(5);
  MelEnergy mel = random01(rng1, 40, 2);
  Rng ra(9), rb(9);
  QuantizedTokens qa = temporal_quantize(mel, 4, 8, QuantizeMode::kTrain, &ra);
  QuantizedTokens qb = temporal_quantize(mel, 4, 8, QuantizeMode::kTrain, &rb);
  CHECK(qa.tokens == qb.tokens);
  CHECK(qa.offset == qb.offset);

  bool seen[4] = {false, false, false, false};
  Rng rc(1);
  for (int i = 0; i < 100; ++i) {
    QuantizedTokens q = temporal_quantize(mel, 4, 8, QuantizeMode::kTrain, &rc);
    REQUIRE(q.offset >= 0);
    REQUIRE(q.offset < 4);
    seen[q.offset] = true;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("contract errors: bad window, bins, and range") {
  MelEnergy mel = make_features(3, 1, {0.1, 0.2, 0.3});
  CHECK_THROWS_AS(temporal_quantize(mel, 4, 8, QuantizeMode::kInfer),
                  ContractError);  // T < w
  CHECK_THROWS_AS(temporal_quantize(mel, 2, 1, QuantizeMode::kInfer),
                  ContractError);  // n_bins < 2
  MelEnergy bad = make_features(3, 1, {0.1, 1.4, 0.3});
  CHECK_THROWS_AS(temporal_quantize(bad, 2, 8, QuantizeMode::kInfer),
                  ContractError);  // out of [0,1]
}

TEST_CASE("QMEL file round trip and validation") {
  Rng rng(91);
  MelEnergy mel = random01(rng, 12, 3);
  QuantizedTokens q = temporal_quantize(mel, 3, 6, QuantizeMode::kInfer);
  const std::string path = "/tmp/gg_test.qmel";
  save_tokens(path, q);
  QuantizedTokens loaded = load_tokens(path);
  CHECK(loaded.frames == q.frames);
  CHECK(loaded.bands == q.bands);
  CHECK(loaded.n_bins == q.n_bins);
  CHECK(loaded.tokens == q.tokens);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_tokens("/tmp/gg_nonexistent.qmel"), IoError);
}

TEST_CASE("resample map follows round(k*audio_fps/motion_fps)") {
  const auto map = resample_frame_map(320, 30.0, 1067, 100.0);
  REQUIRE(map.size() == 320);
  CHECK(map[0] == 0);
  CHECK(map[3] == 10);
  CHECK(map[319] == 1063);
  for (int v : map) CHECK(v < 1067);
}

TEST_CASE("embedder: all-zero tokens give one repeated row") {
  Rng rng(15);
  AudioEmbedder emb;
  emb.init(4, 3, 8, rng);
  QuantizedTokens toks;
  toks.frames = 5;
  toks.bands = 3;
  toks.n_bins = 4;
  toks.window = 2;
  toks.tokens.assign(15, 0);
  Tensor out = emb.forward(toks, {0, 1, 2, 3, 4});
  for (int t = 1; t < 5; ++t)
    for (int c = 0; c < 8; ++c)
      CHECK(out.data()[t * 8 + c] == out.data()[c]);
}

TEST_CASE("embedder: changing one band's token shifts by that row delta") {
  Rng rng(16);
  AudioEmbedder emb;
  emb.init(4, 2, 6, rng);
  QuantizedTokens a;
  a.frames = 3;
  a.bands = 2;
  a.n_bins = 4;
  a.window = 1;
  a.tokens = {1, 2, 1, 2, 1, 2};
  QuantizedTokens b = a;
  b.tokens[2] = 3;  // frame 1, band 0: token 1 -> 3

  std::vector<int> map = {0, 1, 2};
  Tensor ya = emb.forward(a, map);
  Tensor yb = emb.forward(b, map);

  // Expected delta on frame 1: (table[0*4+3] - table[0*4+1]) * proj_w.
  std::vector<double> delta(6, 0.0);
  for (int c = 0; c < 6; ++c) {
    double acc = 0.0;
    for (int e = 0; e < 6; ++e)
      acc += (emb.table.data()[3 * 6 + e] - emb.table.data()[1 * 6 + e]) *
             emb.proj_w.data()[e * 6 + c];
    delta[c] = acc;
  }
  for (int t = 0; t < 3; ++t)
    for (int c = 0; c < 6; ++c) {
      const double diff = yb.data()[t * 6 + c] - ya.data()[t * 6 + c];
      if (t == 1)
        CHECK(diff == doctest::Approx(delta[c]).epsilon(1e-12));
      else
        CHECK(diff == 0.0);
    }
}

TEST_CASE("embedder: out-of-range token is a contract error") {
  Rng rng(17);
  AudioEmbedder emb;
  emb.init(4, 2, 6, rng);
  QuantizedTokens toks;
  toks.frames = 1;
  toks.bands = 2;
  toks.n_bins = 4;
  toks.window = 1;
  toks.tokens = {0, 5};
  CHECK_THROWS_AS(emb.forward(toks, {0}), ContractError);
}

TEST_SUITE_END();
