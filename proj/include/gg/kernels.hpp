#pragma once

#include <cstddef>
#include <string>

namespace gg::kernels {

// Data-parallel inner loops of the tensor library, in scalar reference form
// and as AVX2 variants selected once at startup. All operate on contiguous
// f64 buffers.
//
// Accumulation-order contract (checked by the equivalence tests):
//   add/sub/mul/scale/axpy, matmul, matmul_tn  -> bitwise identical to scalar
//   dot/sum/sumsq, matmul_nt                   -> lane-split accumulators,
//                                                 equal to ~1e-13 relative
struct Table {
  const char* name;
  void (*add)(const double* a, const double* b, double* y, size_t n);
  void (*sub)(const double* a, const double* b, double* y, size_t n);
  void (*mul)(const double* a, const double* b, double* y, size_t n);
  void (*scale)(const double* x, double s, double* y, size_t n);  // y = s*x
  void (*axpy)(double a, const double* x, double* y, size_t n);   // y += a*x
  double (*dot)(const double* a, const double* b, size_t n);
  double (*sum)(const double* a, size_t n);
  double (*sumsq)(const double* a, size_t n);
  // C[M x N] = A[M x K] * B[K x N], C overwritten
  void (*matmul)(const double* A, const double* B, double* C, size_t M,
                 size_t K, size_t N);
  // C[M x N] = A[M x K] * B[N x K]^T
  void (*matmul_nt)(const double* A, const double* B, double* C, size_t M,
                    size_t K, size_t N);
  // C[M x N] = A[K x M]^T * B[K x N]
  void (*matmul_tn)(const double* A, const double* B, double* C, size_t M,
                    size_t K, size_t N);
};

const Table& scalar_table();
const Table* avx2_table();  // nullptr when not compiled in or unsupported

// Active table: AVX2 when the CPU supports it, unless GG_KERNELS=scalar is
// set in the environment at first use.
const Table& active();
void set_active(const Table& t);  // test hook

}  // namespace gg::kernels
