#pragma once

#include <cstdint>

// Data-parallel numeric kernels behind the Q-network math, with a scalar
// reference implementation and an AVX2 variant selected at runtime.
//
// Numerics contract: every kernel is defined as a fixed operation sequence.
// Reductions run in ascending index order; multiply-accumulate steps are
// fused (correctly rounded FMA). Vector backends parallelize across
// independent outputs only, never across a reduction, so all backends
// produce bit-identical doubles. The whole project is compiled with
// -ffp-contract=off; fused steps are always explicit.
namespace lbsim::kern {

struct Ops {
  const char* name;

  // c[m*n] = a[m*k] * b[k*n], row-major. c[i][j] = fma-chain over p ascending.
  void (*gemm)(const double* a, const double* b, double* c, int m, int k,
               int n);

  // c[m*n] = a[m*k] * b[k*n] + bias[n] broadcast over rows. The chain for
  // c[i][j] starts at bias[j].
  void (*gemm_bias)(const double* a, const double* b, const double* bias,
                    double* c, int m, int k, int n);

  // x[i] = x[i] > 0 ? x[i] : 0
  void (*relu)(double* x, int n);

  // g[i] = act[i] > 0 ? g[i] : 0
  void (*relu_mask)(double* g, const double* act, int n);

  // y[i] = fma(a, x[i], y[i])
  void (*axpy)(double a, const double* x, double* y, int n);

  // out[j] = sum over i ascending of a[i*n + j]
  void (*col_sum)(const double* a, double* out, int m, int n);

  // true if any element is NaN or +-infinity
  bool (*any_nonfinite)(const double* x, int n);
};

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool supported(Backend b);

// Active backend: resolved once from LBSIM_KERNELS ("scalar"/"avx2") or the
// best supported one.
Backend active();
void force(Backend b);  // throws std::runtime_error if unsupported

const Ops& ops();                 // table for active()
const Ops& ops_for(Backend b);    // throws if unsupported

// b[n*m] = a[m*n] transposed. Plain copy, one implementation.
void transpose(const double* a, double* b, int m, int n);

}  // namespace lbsim::kern
