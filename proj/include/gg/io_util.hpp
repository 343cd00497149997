#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <functional>
#include <iosfwd>
#include <string>

namespace gg {

// Little-endian scalar IO. The pipeline's binary formats (MOTN, QMEL,
// checkpoints) are LE on every platform.
namespace le {

template <typename T>
inline T byteswap_if_needed(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char* p = reinterpret_cast<unsigned char*>(&v);
    for (size_t i = 0; i < sizeof(T) / 2; ++i)
      std::swap(p[i], p[sizeof(T) - 1 - i]);
    return v;
  }
}

void put_u16(std::ostream& os, uint16_t v);
void put_u32(std::ostream& os, uint32_t v);
void put_u64(std::ostream& os, uint64_t v);
void put_f32(std::ostream& os, float v);
void put_f64(std::ostream& os, double v);
uint16_t get_u16(std::istream& is);
uint32_t get_u32(std::istream& is);
uint64_t get_u64(std::istream& is);
float get_f32(std::istream& is);
double get_f64(std::istream& is);

}  // namespace le

// Writes via a temp file in the same directory and renames into place, so a
// failed run never leaves a partial output behind.
void atomic_write_file(const std::string& path,
                       const std::function<void(std::ostream&)>& writer);

std::string read_text_file(const std::string& path);
void atomic_write_text(const std::string& path, const std::string& text);

}  // namespace gg
