// NEON kernel variants (aarch64). Same contract as the AVX2 set: elementwise
// kernels round exactly like the scalar reference, reductions use lane
// accumulators with FMA.

#include "sod/kernels/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>

namespace sod::kern {
namespace {

void v_add(const double* a, const double* b, double* out, size_t n) {
  size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void v_sub(const double* a, const double* b, double* out, size_t n) {
  size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void v_mul(const double* a, const double* b, double* out, size_t n) {
  size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void v_axpy(double a, const double* x, double* y, size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t prod = vmulq_f64(va, vld1q_f64(x + i));
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void v_scale(double a, double* x, size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

double v_dot(const double* a, const double* b, size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double v_sum(const double* a, size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double v_sq_sum(const double* a, size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t v = vld1q_f64(a + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

double v_abs_diff_sum(const double* a, const double* b, size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

void v_relu(const double* x, double* y, size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmaxq_f64(zero, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void v_relu_bwd(const double* x, const double* gy, double* gx, size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t mask = vcgtq_f64(vld1q_f64(x + i), zero);
    uint64x2_t gv = vreinterpretq_u64_f64(vld1q_f64(gy + i));
    vst1q_f64(gx + i, vreinterpretq_f64_u64(vandq_u64(mask, gv)));
  }
  for (; i < n; ++i) gx[i] = x[i] > 0.0 ? gy[i] : 0.0;
}

void scale_rows(int m, int n, double beta, double* C, int ldc) {
  if (beta == 1.0) return;
  for (int i = 0; i < m; ++i) {
    double* c = C + static_cast<size_t>(i) * ldc;
    if (beta == 0.0) {
      for (int j = 0; j < n; ++j) c[j] = 0.0;
    } else {
      v_scale(beta, c, static_cast<size_t>(n));
    }
  }
}

inline void fma_row(double a, const double* b, double* c, int n) {
  const float64x2_t va = vdupq_n_f64(a);
  int j = 0;
  for (; j + 2 <= n; j += 2)
    vst1q_f64(c + j, vfmaq_f64(vld1q_f64(c + j), va, vld1q_f64(b + j)));
  for (; j < n; ++j) c[j] += a * b[j];
}

void v_gemm_nn(int m, int n, int k, double alpha, const double* A, int lda,
               const double* B, int ldb, double beta, double* C, int ldc) {
  scale_rows(m, n, beta, C, ldc);
  for (int i = 0; i < m; ++i) {
    const double* arow = A + static_cast<size_t>(i) * lda;
    double* crow = C + static_cast<size_t>(i) * ldc;
    for (int l = 0; l < k; ++l) {
      const double a = alpha * arow[l];
      if (a == 0.0) continue;
      fma_row(a, B + static_cast<size_t>(l) * ldb, crow, n);
    }
  }
}

void v_gemm_tn(int m, int n, int k, double alpha, const double* A, int lda,
               const double* B, int ldb, double beta, double* C, int ldc) {
  scale_rows(m, n, beta, C, ldc);
  for (int l = 0; l < k; ++l) {
    const double* arow = A + static_cast<size_t>(l) * lda;
    const double* brow = B + static_cast<size_t>(l) * ldb;
    for (int i = 0; i < m; ++i) {
      const double a = alpha * arow[i];
      if (a == 0.0) continue;
      fma_row(a, brow, C + static_cast<size_t>(i) * ldc, n);
    }
  }
}

void v_gemm_nt(int m, int n, int k, double alpha, const double* A, int lda,
               const double* B, int ldb, double beta, double* C, int ldc) {
  for (int i = 0; i < m; ++i) {
    const double* arow = A + static_cast<size_t>(i) * lda;
    double* crow = C + static_cast<size_t>(i) * ldc;
    for (int j = 0; j < n; ++j) {
      const double s = v_dot(arow, B + static_cast<size_t>(j) * ldb,
                             static_cast<size_t>(k));
      crow[j] = alpha * s + (beta == 0.0 ? 0.0 : beta * crow[j]);
    }
  }
}

void v_threshold_counts(const double* y, const uint8_t* g, size_t n,
                        const double* ts, int nt, int64_t* pred_pos,
                        int64_t* true_pos) {
  for (int t = 0; t < nt; ++t) {
    const double th = ts[t];
    int64_t pp = 0, tp = 0;
    for (size_t i = 0; i < n; ++i) {
      if (y[i] >= th) {
        ++pp;
        tp += g[i] != 0;
      }
    }
    pred_pos[t] = pp;
    true_pos[t] = tp;
  }
}

}  // namespace

const Ops* neon_ops() {
  static const Ops ops = {
      "neon",  v_add,    v_sub,     v_mul,     v_axpy,    v_scale,
      v_dot,   v_sum,    v_sq_sum,  v_abs_diff_sum,       v_relu,
      v_relu_bwd,        v_gemm_nn, v_gemm_tn, v_gemm_nt, v_threshold_counts,
  };
  return &ops;
}

}  // namespace sod::kern

#else

namespace sod::kern {
const Ops* neon_ops() { return nullptr; }
}  // namespace sod::kern

#endif
