#include <cmath>

#include "backends.hpp"

// Reference kernels. The accumulation order here is the contract the vector
// backends must reproduce bit-for-bit: ascending p, one std::fma per step.

namespace lbsim::kern {
namespace {

void gemm_acc(const double* a, const double* b, double* c, int m, int k,
              int n) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<long>(i) * k;
    double* crow = c + static_cast<long>(i) * n;
    for (int p = 0; p < k; ++p) {
      const double ap = arow[p];
      const double* brow = b + static_cast<long>(p) * n;
      for (int j = 0; j < n; ++j) crow[j] = std::fma(ap, brow[j], crow[j]);
    }
  }
}

void gemm_scalar(const double* a, const double* b, double* c, int m, int k,
                 int n) {
  for (long i = 0; i < static_cast<long>(m) * n; ++i) c[i] = 0.0;
  gemm_acc(a, b, c, m, k, n);
}

void gemm_bias_scalar(const double* a, const double* b, const double* bias,
                      double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) c[static_cast<long>(i) * n + j] = bias[j];
  gemm_acc(a, b, c, m, k, n);
}

void relu_scalar(double* x, int n) {
  for (int i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_mask_scalar(double* g, const double* act, int n) {
  for (int i = 0; i < n; ++i) g[i] = act[i] > 0.0 ? g[i] : 0.0;
}

void axpy_scalar(double a, const double* x, double* y, int n) {
  for (int i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void col_sum_scalar(const double* a, double* out, int m, int n) {
  for (int j = 0; j < n; ++j) out[j] = 0.0;
  for (int i = 0; i < m; ++i) {
    const double* row = a + static_cast<long>(i) * n;
    for (int j = 0; j < n; ++j) out[j] += row[j];
  }
}

bool any_nonfinite_scalar(const double* x, int n) {
  for (int i = 0; i < n; ++i)
    if (!std::isfinite(x[i])) return true;
  return false;
}

}  // namespace

const Ops kScalarOps = {
    "scalar",         gemm_scalar, gemm_bias_scalar, relu_scalar,
    relu_mask_scalar, axpy_scalar, col_sum_scalar,   any_nonfinite_scalar,
};

}  // namespace lbsim::kern
