#include "gg/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace gg::kernels {

#ifdef GG_HAVE_AVX2
const Table* avx2_table_impl();
#endif

const Table* avx2_table() {
#ifdef GG_HAVE_AVX2
  if (__builtin_cpu_supports("avx2")) return avx2_table_impl();
#endif
  return nullptr;
}

namespace {

const Table* pick_initial() {
  if (const char* env = std::getenv("GG_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_table();
  }
  if (const Table* t = avx2_table()) return t;
  return &scalar_table();
}

const Table*& active_ptr() {
  static const Table* p = pick_initial();
  return p;
}

}  // namespace

const Table& active() { return *active_ptr(); }

void set_active(const Table& t) { active_ptr() = &t; }

}  // namespace gg::kernels
