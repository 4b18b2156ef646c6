#pragma once

#include <array>
#include <string>
#include <vector>

#include "lbsim/rng.hpp"

// The five-layer value network: input, three rectified hidden layers,
// linear output. Parameters live in one flat buffer laid out
// [W1|b1|W2|b2|W3|b3|W4|b4] with weights stored fan_in x fan_out row-major,
// so the whole net updates with a single fused-multiply-add sweep. All math
// routes through the runtime-selected kernels, whose backends are
// bit-identical, so results do not depend on the host's SIMD support.

namespace lbsim {

class QNetwork {
 public:
  QNetwork(int in_dim, int h1, int h2, int h3, int out_dim);

  const std::array<int, 5>& dims() const { return dims_; }
  int in_dim() const { return dims_[0]; }
  int out_dim() const { return dims_[4]; }
  int param_count() const { return static_cast<int>(params_.size()); }
  const std::vector<double>& params() const { return params_; }
  std::vector<double>& params() { return params_; }

  // Weights uniform in +-sqrt(6/(fan_in+fan_out)) per layer, biases zero;
  // layer order and row-major draw order are fixed.
  void init_uniform(Rng& rng);

  void copy_params_from(const QNetwork& other);

  // q holds batch x out_dim Q-values.
  void forward(const double* x, int batch, double* q) const;
  std::vector<double> forward_one(const std::vector<double>& s) const;

  // Squared temporal-difference loss, averaged over the batch, with the
  // gradient flowing only through each sample's taken action. Returns the
  // loss; grad is resized to param_count().
  double loss_and_gradient(const double* x, const int* actions,
                           const double* targets, int batch,
                           std::vector<double>& grad) const;

  // One plain gradient-descent step at rate lr; returns the pre-step loss.
  double train_step(const double* x, const int* actions, const double* targets,
                    int batch, double lr);

  bool params_finite() const;

  // Versioned little-endian binary checkpoint; a round trip restores forward
  // outputs bit-exactly.
  void save(const std::string& path) const;
  static QNetwork load(const std::string& path);

 private:
  struct Layer {
    int w_off, b_off, fan_in, fan_out;
  };

  void forward_internal(const double* x, int batch) const;

  std::array<int, 5> dims_;
  std::array<Layer, 4> layers_;
  std::vector<double> params_;

  // Per-instance scratch; each agent owns its network exclusively, so this
  // is safe and keeps the hot loop allocation-free.
  mutable std::vector<double> a1_, a2_, a3_, out_, d_, d_prev_, tposed_;
  mutable std::vector<double> grad_;
};

}  // namespace lbsim
