#include "gg/quantize.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "gg/common.hpp"
#include "gg/io_util.hpp"

namespace gg {

QuantizedTokens temporal_quantize(const MelEnergy& features, int window,
                                  int n_bins, QuantizeMode mode, Rng* rng) {
  const int T = features.frames, D = features.bands;
  require(window >= 1 && T >= window,
          "temporal_quantize: need T >= w >= 1, got T=" + std::to_string(T) +
              " w=" + std::to_string(window));
  require(n_bins >= 2, "temporal_quantize: n_bins must be >= 2");
  for (double v : features.values)
    require(v >= -1e-9 && v <= 1.0 + 1e-9,
            "temporal_quantize: features must be in [0,1]");

  int s;
  if (mode == QuantizeMode::kTrain) {
    require(rng != nullptr, "temporal_quantize: train mode needs an rng");
    s = uniform_int(*rng, 0, window - 1);
  } else {
    s = window / 2;
  }
  require(s < T, "temporal_quantize: empty downsample (offset " +
                     std::to_string(s) + " >= T=" + std::to_string(T) + ")");

  const int n_down = (T - s + window - 1) / window;  // frames at s, s+w, ...

  QuantizedTokens out;
  out.frames = T;
  out.bands = D;
  out.n_bins = n_bins;
  out.window = window;
  out.offset = s;
  out.tokens.resize(static_cast<size_t>(T) * D);

  for (int t = 0; t < T; ++t) {
    const int down_idx = std::min(t / window, n_down - 1);
    const int src = s + down_idx * window;
    for (int d = 0; d < D; ++d) {
      const double v = features.at(src, d);
      int q;
      if (n_bins == 2) {
        q = v > 0.05 ? 1 : 0;
      } else {
        q = static_cast<int>(std::floor(v * n_bins));
        q = std::clamp(q, 0, n_bins - 1);
      }
      out.tokens[static_cast<size_t>(t) * D + d] = static_cast<uint8_t>(q);
    }
  }
  return out;
}

void save_tokens(const std::string& path, const QuantizedTokens& tokens) {
  require(tokens.n_bins <= 256, "save_tokens: n_bins must fit in a byte");
  atomic_write_file(path, [&](std::ostream& os) {
    os.write("QMEL", 4);
    le::put_u32(os, static_cast<uint32_t>(tokens.frames));
    le::put_u32(os, static_cast<uint32_t>(tokens.bands));
    le::put_u32(os, static_cast<uint32_t>(tokens.n_bins));
    os.write(reinterpret_cast<const char*>(tokens.tokens.data()),
             static_cast<std::streamsize>(tokens.tokens.size()));
  });
}

QuantizedTokens load_tokens(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != "QMEL")
    throw FormatError("'" + path + "' is not a QMEL token file");
  QuantizedTokens out;
  out.frames = static_cast<int>(le::get_u32(is));
  out.bands = static_cast<int>(le::get_u32(is));
  out.n_bins = static_cast<int>(le::get_u32(is));
  if (out.frames <= 0 || out.bands <= 0 || out.n_bins < 2 || out.n_bins > 256)
    throw FormatError("'" + path + "': malformed QMEL header");
  out.tokens.resize(static_cast<size_t>(out.frames) * out.bands);
  is.read(reinterpret_cast<char*>(out.tokens.data()),
          static_cast<std::streamsize>(out.tokens.size()));
  if (!is) throw FormatError("'" + path + "': truncated QMEL payload");
  for (uint8_t t : out.tokens)
    if (t >= out.n_bins)
      throw FormatError("'" + path + "': token value out of range");
  return out;
}

std::string tokens_debug_json(const QuantizedTokens& tokens) {
  nlohmann::json j;
  j["frames"] = tokens.frames;
  j["bands"] = tokens.bands;
  j["n_bins"] = tokens.n_bins;
  j["window"] = tokens.window;
  j["offset"] = tokens.offset;
  auto rows = nlohmann::json::array();
  for (int t = 0; t < tokens.frames; ++t) {
    auto row = nlohmann::json::array();
    for (int d = 0; d < tokens.bands; ++d) row.push_back(tokens.at(t, d));
    rows.push_back(row);
  }
  j["tokens"] = rows;
  return j.dump(2);
}

}  // namespace gg
