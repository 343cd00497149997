#include "gg/kernels.hpp"

namespace gg::kernels {
namespace {

void add_ref(const double* a, const double* b, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = a[i] + b[i];
}

void sub_ref(const double* a, const double* b, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = a[i] - b[i];
}

void mul_ref(const double* a, const double* b, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

void scale_ref(const double* x, double s, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = s * x[i];
}

void axpy_ref(double a, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_ref(const double* a, const double* b, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_ref(const double* a, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double sumsq_ref(const double* a, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

// i-k-j order; the vector variant keeps the same per-element accumulation
// order so the two agree bitwise.
void matmul_ref(const double* A, const double* B, double* C, size_t M,
                size_t K, size_t N) {
  for (size_t i = 0; i < M; ++i) {
    double* c = C + i * N;
    for (size_t j = 0; j < N; ++j) c[j] = 0.0;
    for (size_t k = 0; k < K; ++k) {
      const double a = A[i * K + k];
      const double* b = B + k * N;
      for (size_t j = 0; j < N; ++j) c[j] += a * b[j];
    }
  }
}

void matmul_nt_ref(const double* A, const double* B, double* C, size_t M,
                   size_t K, size_t N) {
  for (size_t i = 0; i < M; ++i)
    for (size_t j = 0; j < N; ++j)
      C[i * N + j] = dot_ref(A + i * K, B + j * K, K);
}

void matmul_tn_ref(const double* A, const double* B, double* C, size_t M,
                   size_t K, size_t N) {
  for (size_t i = 0; i < M * N; ++i) C[i] = 0.0;
  for (size_t k = 0; k < K; ++k) {
    const double* b = B + k * N;
    for (size_t m = 0; m < M; ++m) {
      const double a = A[k * M + m];
      double* c = C + m * N;
      for (size_t j = 0; j < N; ++j) c[j] += a * b[j];
    }
  }
}

}  // namespace

const Table& scalar_table() {
  static const Table t = {
      "scalar",    add_ref,   sub_ref,       mul_ref,       scale_ref,
      axpy_ref,    dot_ref,   sum_ref,       sumsq_ref,     matmul_ref,
      matmul_nt_ref, matmul_tn_ref,
  };
  return t;
}

}  // namespace gg::kernels
