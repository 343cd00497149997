#ifdef GG_HAVE_AVX2

#include <immintrin.h>

#include "gg/kernels.hpp"

// Deliberately mul+add rather than FMA in the loops that promise bitwise
// equality with the scalar reference (see Table contract in kernels.hpp).
namespace gg::kernels {
namespace {

void add_avx2(const double* a, const double* b, double* y, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                          _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) y[i] = a[i] + b[i];
}

void sub_avx2(const double* a, const double* b, double* y, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                          _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) y[i] = a[i] - b[i];
}

void mul_avx2(const double* a, const double* b, double* y, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                          _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void scale_avx2(const double* x, double s, double* y, size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = s * x[i];
}

void axpy_avx2(double a, const double* x, double* y, size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(s, s);
  return _mm_cvtsd_f64(_mm_add_sd(s, sh));
}

double dot_avx2(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double sum_avx2(const double* a, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i];
  return r;
}

double sumsq_avx2(const double* a, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += a[i] * a[i];
  return r;
}

// Vectorized over output columns; k loop outermost-inner keeps each C[i,j]
// accumulating in the same order as the scalar reference.
void matmul_avx2(const double* A, const double* B, double* C, size_t M,
                 size_t K, size_t N) {
  for (size_t i = 0; i < M; ++i) {
    double* c = C + i * N;
    size_t j = 0;
    for (; j + 4 <= N; j += 4) _mm256_storeu_pd(c + j, _mm256_setzero_pd());
    for (; j < N; ++j) c[j] = 0.0;
    for (size_t k = 0; k < K; ++k) {
      const __m256d a = _mm256_set1_pd(A[i * K + k]);
      const double* b = B + k * N;
      size_t jj = 0;
      for (; jj + 4 <= N; jj += 4) {
        __m256d prod = _mm256_mul_pd(a, _mm256_loadu_pd(b + jj));
        _mm256_storeu_pd(c + jj, _mm256_add_pd(_mm256_loadu_pd(c + jj), prod));
      }
      const double as = A[i * K + k];
      for (; jj < N; ++jj) c[jj] += as * b[jj];
    }
  }
}

void matmul_nt_avx2(const double* A, const double* B, double* C, size_t M,
                    size_t K, size_t N) {
  for (size_t i = 0; i < M; ++i)
    for (size_t j = 0; j < N; ++j)
      C[i * N + j] = dot_avx2(A + i * K, B + j * K, K);
}

void matmul_tn_avx2(const double* A, const double* B, double* C, size_t M,
                    size_t K, size_t N) {
  size_t z = 0;
  for (; z + 4 <= M * N; z += 4) _mm256_storeu_pd(C + z, _mm256_setzero_pd());
  for (; z < M * N; ++z) C[z] = 0.0;
  for (size_t k = 0; k < K; ++k) {
    const double* b = B + k * N;
    for (size_t m = 0; m < M; ++m) {
      axpy_avx2(A[k * M + m], b, C + m * N, N);
    }
  }
}

}  // namespace

const Table* avx2_table_impl() {
  static const Table t = {
      "avx2",       add_avx2,   sub_avx2,       mul_avx2,       scale_avx2,
      axpy_avx2,    dot_avx2,   sum_avx2,       sumsq_avx2,     matmul_avx2,
      matmul_nt_avx2, matmul_tn_avx2,
  };
  return &t;
}

}  // namespace gg::kernels

#endif  // GG_HAVE_AVX2
