#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "gg/kernels.hpp"
#include "gg/rng.hpp"

using namespace gg;

namespace {

std::vector<double> random_vec(Rng& rng, size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  return v;
}

bool bitwise_equal(const std::vector<double>& a,
                   const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::memcmp(&a[i], &b[i], 8) != 0) return false;
  return true;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / (std::abs(a) + std::abs(b) + 1e-300);
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("scalar/avx2 elementwise variants agree bitwise") {
  const kernels::Table* avx2 = kernels::avx2_table();
  if (!avx2) {
    MESSAGE("AVX2 not available; scalar-only build");
    return;
  }
  const kernels::Table& ref = kernels::scalar_table();
  Rng rng(11);
  for (size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    auto a = random_vec(rng, n), b = random_vec(rng, n);
    std::vector<double> y1(n), y2(n);

    ref.add(a.data(), b.data(), y1.data(), n);
    avx2->add(a.data(), b.data(), y2.data(), n);
    CHECK(bitwise_equal(y1, y2));

    ref.sub(a.data(), b.data(), y1.data(), n);
    avx2->sub(a.data(), b.data(), y2.data(), n);
    CHECK(bitwise_equal(y1, y2));

    ref.mul(a.data(), b.data(), y1.data(), n);
    avx2->mul(a.data(), b.data(), y2.data(), n);
    CHECK(bitwise_equal(y1, y2));

    ref.scale(a.data(), 1.7, y1.data(), n);
    avx2->scale(a.data(), 1.7, y2.data(), n);
    CHECK(bitwise_equal(y1, y2));

    y1 = b;
    y2 = b;
    ref.axpy(-0.3, a.data(), y1.data(), n);
    avx2->axpy(-0.3, a.data(), y2.data(), n);
    CHECK(bitwise_equal(y1, y2));
  }
}

TEST_CASE("matmul variants: bitwise where loop order matches") {
  const kernels::Table* avx2 = kernels::avx2_table();
  if (!avx2) return;
  const kernels::Table& ref = kernels::scalar_table();
  Rng rng(12);
  const int sizes[][3] = {{1, 1, 1}, {2, 3, 2}, {5, 7, 9}, {16, 16, 16},
                          {13, 31, 6}};
  for (const auto& s : sizes) {
    const size_t m = s[0], k = s[1], n = s[2];
    auto a = random_vec(rng, m * k);
    auto b = random_vec(rng, k * n);
    std::vector<double> c1(m * n), c2(m * n);

    ref.matmul(a.data(), b.data(), c1.data(), m, k, n);
    avx2->matmul(a.data(), b.data(), c2.data(), m, k, n);
    CHECK(bitwise_equal(c1, c2));

    auto at = random_vec(rng, k * m);
    ref.matmul_tn(at.data(), b.data(), c1.data(), m, k, n);
    avx2->matmul_tn(at.data(), b.data(), c2.data(), m, k, n);
    CHECK(bitwise_equal(c1, c2));

    // A*B^T accumulates lane-split; near-equal only.
    auto bt = random_vec(rng, n * k);
    ref.matmul_nt(a.data(), bt.data(), c1.data(), m, k, n);
    avx2->matmul_nt(a.data(), bt.data(), c2.data(), m, k, n);
    for (size_t i = 0; i < c1.size(); ++i)
      CHECK(rel_err(c1[i], c2[i]) < 1e-13);
  }
}

TEST_CASE("reductions agree to 1e-13 relative") {
  const kernels::Table* avx2 = kernels::avx2_table();
  if (!avx2) return;
  const kernels::Table& ref = kernels::scalar_table();
  Rng rng(13);
  for (size_t n : {1u, 4u, 5u, 100u, 999u}) {
    auto a = random_vec(rng, n), b = random_vec(rng, n);
    CHECK(rel_err(ref.dot(a.data(), b.data(), n),
                  avx2->dot(a.data(), b.data(), n)) < 1e-13);
    CHECK(rel_err(ref.sum(a.data(), n), avx2->sum(a.data(), n)) < 1e-13);
    CHECK(rel_err(ref.sumsq(a.data(), n), avx2->sumsq(a.data(), n)) < 1e-13);
  }
}

TEST_CASE("dispatch table is selectable") {
  const kernels::Table& before = kernels::active();
  kernels::set_active(kernels::scalar_table());
  CHECK(std::string(kernels::active().name) == "scalar");
  kernels::set_active(before);
}

TEST_SUITE_END();
