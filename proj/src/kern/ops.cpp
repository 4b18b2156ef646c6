#include "lbsim/kern/ops.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "backends.hpp"

namespace lbsim::kern {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend resolve_initial() {
  if (const char* env = std::getenv("LBSIM_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2") {
      if (!supported(Backend::avx2))
        throw std::runtime_error(
            "LBSIM_KERNELS=avx2 but this CPU lacks AVX2/FMA");
      return Backend::avx2;
    }
    throw std::runtime_error("LBSIM_KERNELS must be 'scalar' or 'avx2', got '" +
                             want + "'");
  }
  return supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

Backend& active_slot() {
  static Backend b = resolve_initial();
  return b;
}

}  // namespace

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
  }
  return false;
}

Backend active() { return active_slot(); }

void force(Backend b) {
  if (!supported(b))
    throw std::runtime_error(std::string("kernel backend '") +
                             backend_name(b) + "' is not supported here");
  active_slot() = b;
}

const Ops& ops() { return ops_for(active()); }

const Ops& ops_for(Backend b) {
  if (!supported(b))
    throw std::runtime_error(std::string("kernel backend '") +
                             backend_name(b) + "' is not supported here");
#if defined(__x86_64__) || defined(__i386__)
  if (b == Backend::avx2) return kAvx2Ops;
#endif
  return kScalarOps;
}

void transpose(const double* a, double* b, int m, int n) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      b[static_cast<long>(j) * m + i] = a[static_cast<long>(i) * n + j];
}

}  // namespace lbsim::kern
