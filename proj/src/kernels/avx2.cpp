// AVX2 kernel variants. This translation unit is compiled with
// -mavx2 -mfma -ffp-contract=off; everything else in the project is built for
// the baseline ISA and reaches these kernels through the dispatch table only.
//
// Elementwise kernels stay FMA-free so they round exactly like the scalar
// reference. Reductions and gemm use FMA with lane accumulators.

#include "sod/kernels/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace sod::kern {
namespace {

void v_add(const double* a, const double* b, double* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void v_sub(const double* a, const double* b, double* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void v_mul(const double* a, const double* b, double* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

// mul+add on purpose, not FMA: keeps the result bit-identical to ref.
void v_axpy(double a, const double* x, double* y, size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] = y[i] + a * x[i];
}

void v_scale(double a, double* x, size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double v_dot(const double* a, const double* b, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double v_sum(const double* a, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double v_sq_sum(const double* a, size_t n) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

double v_abs_diff_sum(const double* a, const double* b, size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

void v_relu(const double* x, double* y, size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void v_relu_bwd(const double* x, const double* gy, double* gx, size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(x + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(gx + i, _mm256_and_pd(mask, _mm256_loadu_pd(gy + i)));
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
  const __m256d va = _mm256_set1_pd(a);
  int j = 0;
  for (; j + 8 <= n; j += 8) {
    _mm256_storeu_pd(c + j, _mm256_fmadd_pd(va, _mm256_loadu_pd(b + j),
                                            _mm256_loadu_pd(c + j)));
    _mm256_storeu_pd(c + j + 4, _mm256_fmadd_pd(va, _mm256_loadu_pd(b + j + 4),
                                                _mm256_loadu_pd(c + j + 4)));
  }
  for (; j + 4 <= n; j += 4)
    _mm256_storeu_pd(c + j, _mm256_fmadd_pd(va, _mm256_loadu_pd(b + j),
                                            _mm256_loadu_pd(c + j)));
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
    const __m256d th = _mm256_set1_pd(ts[t]);
    int64_t pp = 0, tp = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      int bits = _mm256_movemask_pd(
          _mm256_cmp_pd(_mm256_loadu_pd(y + i), th, _CMP_GE_OQ));
      if (!bits) continue;
      pp += __builtin_popcount(bits);
      int gbits = (g[i] != 0) | ((g[i + 1] != 0) << 1) | ((g[i + 2] != 0) << 2) |
                  ((g[i + 3] != 0) << 3);
      tp += __builtin_popcount(bits & gbits);
    }
    const double th_s = ts[t];
    for (; i < n; ++i) {
      if (y[i] >= th_s) {
        ++pp;
        tp += g[i] != 0;
      }
    }
    pred_pos[t] = pp;
    true_pos[t] = tp;
  }
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops = {
      "avx2",  v_add,    v_sub,     v_mul,     v_axpy,    v_scale,
      v_dot,   v_sum,    v_sq_sum,  v_abs_diff_sum,       v_relu,
      v_relu_bwd,        v_gemm_nn, v_gemm_tn, v_gemm_nt, v_threshold_counts,
  };
  return &ops;
}

}  // namespace sod::kern

#else

namespace sod::kern {
const Ops* avx2_ops() { return nullptr; }
}  // namespace sod::kern

#endif
