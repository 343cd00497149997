#include "gg/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "gg/io_util.hpp"

namespace gg {

namespace {

std::string read_tag(std::istream& is) {
  char tag[4];
  is.read(tag, 4);
  if (!is) throw FormatError("WAV: unexpected end of file");
  return std::string(tag, 4);
}

}  // namespace

AudioSignal load_wav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");

  if (read_tag(is) != "RIFF") throw FormatError("'" + path + "': not a RIFF file");
  le::get_u32(is);  // riff size, unchecked
  if (read_tag(is) != "WAVE") throw FormatError("'" + path + "': not a WAV file");

  AudioSignal signal;
  bool have_fmt = false, have_data = false;
  while (is && !(have_fmt && have_data)) {
    is.peek();
    if (is.eof()) break;
    const std::string chunk = read_tag(is);
    const uint32_t size = le::get_u32(is);
    if (chunk == "fmt ") {
      if (size < 16) throw FormatError("'" + path + "': malformed fmt chunk");
      const uint16_t format = le::get_u16(is);
      const uint16_t channels = le::get_u16(is);
      signal.sample_rate = static_cast<int>(le::get_u32(is));
      le::get_u32(is);  // byte rate
      le::get_u16(is);  // block align
      const uint16_t bits = le::get_u16(is);
      if (format != 1)
        throw FormatError("'" + path +
                          "': unsupported format (compressed WAV; need PCM)");
      if (channels != 1)
        throw FormatError("'" + path +
                          "': unsupported format (multichannel; need mono)");
      if (bits != 16)
        throw FormatError("'" + path + "': unsupported format (" +
                          std::to_string(bits) + "-bit; need 16-bit PCM)");
      if (size > 16) is.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (chunk == "data") {
      if (!have_fmt)
        throw FormatError("'" + path + "': data chunk before fmt chunk");
      const size_t n = size / 2;
      std::vector<char> raw(size);
      is.read(raw.data(), size);
      if (!is) throw FormatError("'" + path + "': truncated data chunk");
      signal.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t s;
        std::memcpy(&s, raw.data() + 2 * i, 2);
        s = le::byteswap_if_needed(s);
        signal.samples[i] = static_cast<double>(s) / 32768.0;
      }
      have_data = true;
    } else {
      is.seekg(size + (size & 1), std::ios::cur);  // chunks are word-aligned
    }
  }
  if (!have_fmt || !have_data)
    throw FormatError("'" + path + "': missing fmt or data chunk");
  require(signal.sample_rate > 0, "WAV: sample rate must be positive");
  return signal;
}

void save_wav(const std::string& path, const AudioSignal& signal) {
  require(signal.sample_rate > 0, "save_wav: sample rate must be positive");
  const uint32_t n = static_cast<uint32_t>(signal.samples.size());
  atomic_write_file(path, [&](std::ostream& os) {
    os.write("RIFF", 4);
    le::put_u32(os, 36 + 2 * n);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    le::put_u32(os, 16);
    le::put_u16(os, 1);  // PCM
    le::put_u16(os, 1);  // mono
    le::put_u32(os, static_cast<uint32_t>(signal.sample_rate));
    le::put_u32(os, static_cast<uint32_t>(signal.sample_rate) * 2);
    le::put_u16(os, 2);   // block align
    le::put_u16(os, 16);  // bits per sample
    os.write("data", 4);
    le::put_u32(os, 2 * n);
    for (double v : signal.samples) {
      const double clamped = std::clamp(v * 32768.0, -32768.0, 32767.0);
      le::put_u16(os, static_cast<uint16_t>(
                          static_cast<int16_t>(std::lround(clamped))));
    }
  });
}

}  // namespace gg
