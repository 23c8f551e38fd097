#include "sod/kernels/kernels.hpp"

#include <cmath>

// Scalar reference kernels. These define the semantics every vector variant
// is tested against.

namespace sod::kern {
namespace {

void r_add(const double* a, const double* b, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}
void r_sub(const double* a, const double* b, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}
void r_mul(const double* a, const double* b, double* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}
void r_axpy(double a, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = y[i] + a * x[i];
}
void r_scale(double a, double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= a;
}

double r_dot(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}
double r_sum(const double* a, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i];
  return s;
}
double r_sq_sum(const double* a, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}
double r_abs_diff_sum(const double* a, const double* b, size_t n) {
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

void r_relu(const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}
void r_relu_bwd(const double* x, const double* gy, double* gx, size_t n) {
  for (size_t i = 0; i < n; ++i) gx[i] = x[i] > 0.0 ? gy[i] : 0.0;
}

void scale_rows(int m, int n, double beta, double* C, int ldc) {
  if (beta == 1.0) return;
  for (int i = 0; i < m; ++i) {
    double* c = C + static_cast<size_t>(i) * ldc;
    if (beta == 0.0) {
      for (int j = 0; j < n; ++j) c[j] = 0.0;
    } else {
      for (int j = 0; j < n; ++j) c[j] *= beta;
    }
  }
}

// C[i,:] += alpha * A[i,l] * B[l,:], axpy-style inner loop over j.
void r_gemm_nn(int m, int n, int k, double alpha, const double* A, int lda,
               const double* B, int ldb, double beta, double* C, int ldc) {
  scale_rows(m, n, beta, C, ldc);
  for (int i = 0; i < m; ++i) {
    const double* arow = A + static_cast<size_t>(i) * lda;
    double* crow = C + static_cast<size_t>(i) * ldc;
    for (int l = 0; l < k; ++l) {
      const double a = alpha * arow[l];
      if (a == 0.0) continue;
      const double* brow = B + static_cast<size_t>(l) * ldb;
      for (int j = 0; j < n; ++j) crow[j] += a * brow[j];
    }
  }
}

// A is stored [k x m]; C[i,:] += alpha * A[l,i] * B[l,:].
void r_gemm_tn(int m, int n, int k, double alpha, const double* A, int lda,
               const double* B, int ldb, double beta, double* C, int ldc) {
  scale_rows(m, n, beta, C, ldc);
  for (int l = 0; l < k; ++l) {
    const double* arow = A + static_cast<size_t>(l) * lda;
    const double* brow = B + static_cast<size_t>(l) * ldb;
    for (int i = 0; i < m; ++i) {
      const double a = alpha * arow[i];
      if (a == 0.0) continue;
      double* crow = C + static_cast<size_t>(i) * ldc;
      for (int j = 0; j < n; ++j) crow[j] += a * brow[j];
    }
  }
}

// B is stored [n x k]; C[i,j] += alpha * dot(A[i,:], B[j,:]).
void r_gemm_nt(int m, int n, int k, double alpha, const double* A, int lda,
               const double* B, int ldb, double beta, double* C, int ldc) {
  for (int i = 0; i < m; ++i) {
    const double* arow = A + static_cast<size_t>(i) * lda;
    double* crow = C + static_cast<size_t>(i) * ldc;
    for (int j = 0; j < n; ++j) {
      const double* brow = B + static_cast<size_t>(j) * ldb;
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += arow[l] * brow[l];
      crow[j] = alpha * s + (beta == 0.0 ? 0.0 : beta * crow[j]);
    }
  }
}

void r_threshold_counts(const double* y, const uint8_t* g, size_t n,
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

const Ops& ref_ops() {
  static const Ops ops = {
      "ref",   r_add,    r_sub,     r_mul,     r_axpy,    r_scale,
      r_dot,   r_sum,    r_sq_sum,  r_abs_diff_sum,       r_relu,
      r_relu_bwd,        r_gemm_nn, r_gemm_tn, r_gemm_nt, r_threshold_counts,
  };
  return ops;
}

}  // namespace sod::kern
