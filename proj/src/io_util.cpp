#include "gg/io_util.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gg/common.hpp"

namespace gg {
namespace le {

namespace {
template <typename T>
void put_raw(std::ostream& os, T v) {
  v = byteswap_if_needed(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get_raw(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FormatError("unexpected end of file while reading");
  return byteswap_if_needed(v);
}
}  // namespace

void put_u16(std::ostream& os, uint16_t v) { put_raw(os, v); }
void put_u32(std::ostream& os, uint32_t v) { put_raw(os, v); }
void put_u64(std::ostream& os, uint64_t v) { put_raw(os, v); }

void put_f32(std::ostream& os, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_raw(os, bits);
}

void put_f64(std::ostream& os, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_raw(os, bits);
}

uint16_t get_u16(std::istream& is) { return get_raw<uint16_t>(is); }
uint32_t get_u32(std::istream& is) { return get_raw<uint32_t>(is); }
uint64_t get_u64(std::istream& is) { return get_raw<uint64_t>(is); }

float get_f32(std::istream& is) {
  uint32_t bits = get_raw<uint32_t>(is);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

double get_f64(std::istream& is) {
  uint64_t bits = get_raw<uint64_t>(is);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace le

void atomic_write_file(const std::string& path,
                       const std::function<void(std::ostream&)>& writer) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + tmp.string() + "' for writing");
    try {
      writer(os);
    } catch (...) {
      os.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw;
    }
    os.flush();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename temp file into '" + path + "'");
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void atomic_write_text(const std::string& path, const std::string& text) {
  atomic_write_file(path, [&](std::ostream& os) { os << text; });
}

}  // namespace gg
