#include "backends.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

// AVX2 variants. Lanes map to output columns; the per-output fma chain over p
// is identical to the scalar reference, so results match it bit-for-bit.
// This translation unit is compiled with -mavx2 -mfma and must only be
// entered through the dispatcher after a CPU support check.

namespace lbsim::kern {
namespace {

// Accumulates a[m*k] * b[k*n] into c, which the caller pre-fills with the
// chain seeds (zeros or broadcast bias). Rows are blocked by 4 to reuse each
// loaded b row; column tails fall back to scalar std::fma in the same order.
void gemm_acc_avx2(const double* a, const double* b, double* c, int m, int k,
                   int n) {
  const int n4 = n & ~3;
  int i = 0;
  for (; i + 4 <= m; i += 4) {
    const double* a0 = a + static_cast<long>(i) * k;
    const double* a1 = a0 + k;
    const double* a2 = a1 + k;
    const double* a3 = a2 + k;
    double* c0 = c + static_cast<long>(i) * n;
    double* c1 = c0 + n;
    double* c2 = c1 + n;
    double* c3 = c2 + n;
    for (int j = 0; j < n4; j += 4) {
      __m256d acc0 = _mm256_loadu_pd(c0 + j);
      __m256d acc1 = _mm256_loadu_pd(c1 + j);
      __m256d acc2 = _mm256_loadu_pd(c2 + j);
      __m256d acc3 = _mm256_loadu_pd(c3 + j);
      for (int p = 0; p < k; ++p) {
        const __m256d bv = _mm256_loadu_pd(b + static_cast<long>(p) * n + j);
        acc0 = _mm256_fmadd_pd(_mm256_set1_pd(a0[p]), bv, acc0);
        acc1 = _mm256_fmadd_pd(_mm256_set1_pd(a1[p]), bv, acc1);
        acc2 = _mm256_fmadd_pd(_mm256_set1_pd(a2[p]), bv, acc2);
        acc3 = _mm256_fmadd_pd(_mm256_set1_pd(a3[p]), bv, acc3);
      }
      _mm256_storeu_pd(c0 + j, acc0);
      _mm256_storeu_pd(c1 + j, acc1);
      _mm256_storeu_pd(c2 + j, acc2);
      _mm256_storeu_pd(c3 + j, acc3);
    }
    for (int j = n4; j < n; ++j) {
      double s0 = c0[j], s1 = c1[j], s2 = c2[j], s3 = c3[j];
      for (int p = 0; p < k; ++p) {
        const double bv = b[static_cast<long>(p) * n + j];
        s0 = std::fma(a0[p], bv, s0);
        s1 = std::fma(a1[p], bv, s1);
        s2 = std::fma(a2[p], bv, s2);
        s3 = std::fma(a3[p], bv, s3);
      }
      c0[j] = s0;
      c1[j] = s1;
      c2[j] = s2;
      c3[j] = s3;
    }
  }
  for (; i < m; ++i) {
    const double* arow = a + static_cast<long>(i) * k;
    double* crow = c + static_cast<long>(i) * n;
    for (int j = 0; j < n4; j += 4) {
      __m256d acc = _mm256_loadu_pd(crow + j);
      for (int p = 0; p < k; ++p)
        acc = _mm256_fmadd_pd(_mm256_set1_pd(arow[p]),
                              _mm256_loadu_pd(b + static_cast<long>(p) * n + j),
                              acc);
      _mm256_storeu_pd(crow + j, acc);
    }
    for (int j = n4; j < n; ++j) {
      double s = crow[j];
      for (int p = 0; p < k; ++p)
        s = std::fma(arow[p], b[static_cast<long>(p) * n + j], s);
      crow[j] = s;
    }
  }
}

void gemm_avx2(const double* a, const double* b, double* c, int m, int k,
               int n) {
  const long total = static_cast<long>(m) * n;
  const __m256d zero = _mm256_setzero_pd();
  long i = 0;
  for (; i + 4 <= total; i += 4) _mm256_storeu_pd(c + i, zero);
  for (; i < total; ++i) c[i] = 0.0;
  gemm_acc_avx2(a, b, c, m, k, n);
}

void gemm_bias_avx2(const double* a, const double* b, const double* bias,
                    double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    double* crow = c + static_cast<long>(i) * n;
    int j = 0;
    for (; j + 4 <= n; j += 4)
      _mm256_storeu_pd(crow + j, _mm256_loadu_pd(bias + j));
    for (; j < n; ++j) crow[j] = bias[j];
  }
  gemm_acc_avx2(a, b, c, m, k, n);
}

void relu_avx2(double* x, int n) {
  const __m256d zero = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d keep = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(x + i, _mm256_and_pd(v, keep));
  }
  for (; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_mask_avx2(double* g, const double* act, int n) {
  const __m256d zero = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d keep =
        _mm256_cmp_pd(_mm256_loadu_pd(act + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(g + i, _mm256_and_pd(_mm256_loadu_pd(g + i), keep));
  }
  for (; i < n; ++i) g[i] = act[i] > 0.0 ? g[i] : 0.0;
}

void axpy_avx2(double a, const double* x, double* y, int n) {
  const __m256d av = _mm256_set1_pd(a);
  int i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(
        y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i),
                               _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void col_sum_avx2(const double* a, double* out, int m, int n) {
  int j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int i = 0; i < m; ++i)
      acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + static_cast<long>(i) * n + j));
    _mm256_storeu_pd(out + j, acc);
  }
  for (; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += a[static_cast<long>(i) * n + j];
    out[j] = s;
  }
}

bool any_nonfinite_avx2(const double* x, int n) {
  // |x| >= inf catches NaN and both infinities.
  const __m256d absmask = _mm256_set1_pd(-0.0);
  const __m256d inf = _mm256_set1_pd(__builtin_inf());
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_andnot_pd(absmask, _mm256_loadu_pd(x + i));
    const __m256d bad = _mm256_cmp_pd(v, inf, _CMP_NLT_UQ);
    if (_mm256_movemask_pd(bad) != 0) return true;
  }
  for (; i < n; ++i)
    if (!std::isfinite(x[i])) return true;
  return false;
}

}  // namespace

const Ops kAvx2Ops = {
    "avx2",         gemm_avx2, gemm_bias_avx2, relu_avx2,
    relu_mask_avx2, axpy_avx2, col_sum_avx2,   any_nonfinite_avx2,
};

}  // namespace lbsim::kern

#endif  // x86
