#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace sod::kern {

// Inner-loop kernels for the numeric core. Every kernel exists as a scalar
// reference implementation plus optional vector variants; the active set is
// chosen once at startup from CPU capabilities and can be overridden with
// set_backend() (or the SOD_KERNEL_BACKEND environment variable).
//
// Exactness contract:
//   * elementwise kernels (add .. relu_bwd) perform the same per-element
//     operations in the same order on every backend and are bit-identical,
//   * reductions and gemm may reassociate (lane accumulators, FMA) and agree
//     with the reference only to ~1e-13 relative,
//   * threshold_counts is integer-exact on every backend.
struct Ops {
  const char* name;

  void (*add)(const double* a, const double* b, double* out, size_t n);
  void (*sub)(const double* a, const double* b, double* out, size_t n);
  void (*mul)(const double* a, const double* b, double* out, size_t n);
  void (*axpy)(double a, const double* x, double* y, size_t n);  // y += a*x
  void (*scale)(double a, double* x, size_t n);                  // x *= a

  double (*dot)(const double* a, const double* b, size_t n);
  double (*sum)(const double* a, size_t n);
  double (*sq_sum)(const double* a, size_t n);
  double (*abs_diff_sum)(const double* a, const double* b, size_t n);

  void (*relu)(const double* x, double* y, size_t n);
  void (*relu_bwd)(const double* x, const double* gy, double* gx, size_t n);

  // Row-major GEMM, C = alpha * op(A) * op(B) + beta * C.
  //   nn: A[m x k], B[k x n]     tn: A[k x m] used transposed
  //   nt: B[n x k] used transposed
  void (*gemm_nn)(int m, int n, int k, double alpha, const double* A, int lda,
                  const double* B, int ldb, double beta, double* C, int ldc);
  void (*gemm_tn)(int m, int n, int k, double alpha, const double* A, int lda,
                  const double* B, int ldb, double beta, double* C, int ldc);
  void (*gemm_nt)(int m, int n, int k, double alpha, const double* A, int lda,
                  const double* B, int ldb, double beta, double* C, int ldc);

  // For every threshold ts[t]: pred_pos[t] = #{i : y[i] >= ts[t]} and
  // true_pos[t] = #{i : y[i] >= ts[t] and g[i] != 0}. g is a 0/1 mask.
  void (*threshold_counts)(const double* y, const uint8_t* g, size_t n,
                           const double* ts, int nt, int64_t* pred_pos,
                           int64_t* true_pos);
};

const Ops& ref_ops();
const Ops* avx2_ops();  // null when not compiled in or not supported by the CPU
const Ops* neon_ops();

// Active backend. Defaults to the widest supported vector set.
const Ops& ops();
void set_backend(const std::string& name);  // "auto" | "ref" | "avx2" | "neon"
std::string backend_name();

}  // namespace sod::kern
