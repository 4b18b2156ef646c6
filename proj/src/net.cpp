#include "lbsim/net.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "lbsim/kern/ops.hpp"
#include "lbsim/util.hpp"

namespace lbsim {

namespace {
constexpr char kMagic[8] = {'L', 'B', 'S', 'I', 'M', 'Q', 'N', '1'};
}

QNetwork::QNetwork(int in_dim, int h1, int h2, int h3, int out_dim)
    : dims_{in_dim, h1, h2, h3, out_dim} {
  for (int d : dims_) require(d > 0, "layer width must be positive, got ", d);
  int off = 0;
  for (int l = 0; l < 4; ++l) {
    layers_[l] = Layer{off, off + dims_[l] * dims_[l + 1], dims_[l],
                       dims_[l + 1]};
    off += dims_[l] * dims_[l + 1] + dims_[l + 1];
  }
  params_.assign(off, 0.0);
}

void QNetwork::init_uniform(Rng& rng) {
  for (const Layer& layer : layers_) {
    const double bound =
        std::sqrt(6.0 / (layer.fan_in + layer.fan_out));
    for (int i = 0; i < layer.fan_in * layer.fan_out; ++i)
      params_[layer.w_off + i] = rng.uniform(-bound, bound);
    for (int i = 0; i < layer.fan_out; ++i) params_[layer.b_off + i] = 0.0;
  }
}

void QNetwork::copy_params_from(const QNetwork& other) {
  require(dims_ == other.dims_, "cannot copy parameters between shapes");
  params_ = other.params_;
}

void QNetwork::forward_internal(const double* x, int batch) const {
  const auto& k = kern::ops();
  const double* p = params_.data();
  a1_.resize(static_cast<size_t>(batch) * dims_[1]);
  a2_.resize(static_cast<size_t>(batch) * dims_[2]);
  a3_.resize(static_cast<size_t>(batch) * dims_[3]);
  out_.resize(static_cast<size_t>(batch) * dims_[4]);

  k.gemm_bias(x, p + layers_[0].w_off, p + layers_[0].b_off, a1_.data(), batch,
              dims_[0], dims_[1]);
  k.relu(a1_.data(), batch * dims_[1]);
  k.gemm_bias(a1_.data(), p + layers_[1].w_off, p + layers_[1].b_off,
              a2_.data(), batch, dims_[1], dims_[2]);
  k.relu(a2_.data(), batch * dims_[2]);
  k.gemm_bias(a2_.data(), p + layers_[2].w_off, p + layers_[2].b_off,
              a3_.data(), batch, dims_[2], dims_[3]);
  k.relu(a3_.data(), batch * dims_[3]);
  k.gemm_bias(a3_.data(), p + layers_[3].w_off, p + layers_[3].b_off,
              out_.data(), batch, dims_[3], dims_[4]);
}

void QNetwork::forward(const double* x, int batch, double* q) const {
  require(batch > 0, "forward needs a positive batch");
  forward_internal(x, batch);
  std::memcpy(q, out_.data(), sizeof(double) * batch * dims_[4]);
}

std::vector<double> QNetwork::forward_one(const std::vector<double>& s) const {
  require(static_cast<int>(s.size()) == dims_[0], "state has ", s.size(),
          " entries, the network expects ", dims_[0]);
  std::vector<double> q(dims_[4]);
  forward(s.data(), 1, q.data());
  return q;
}

double QNetwork::loss_and_gradient(const double* x, const int* actions,
                                   const double* targets, int batch,
                                   std::vector<double>& grad) const {
  require(batch > 0, "empty training batch");
  const auto& k = kern::ops();
  const double* p = params_.data();
  const int out_dim = dims_[4];

  forward_internal(x, batch);

  // Loss and its seed at the taken actions only.
  d_.assign(static_cast<size_t>(batch) * out_dim, 0.0);
  double sq_sum = 0.0;
  const double scale = 2.0 / batch;
  for (int b = 0; b < batch; ++b) {
    const int a = actions[b];
    require(a >= 0 && a < out_dim, "action ", a, " out of range");
    const double diff = out_[static_cast<size_t>(b) * out_dim + a] - targets[b];
    sq_sum += diff * diff;
    d_[static_cast<size_t>(b) * out_dim + a] = scale * diff;
  }
  const double loss = sq_sum / batch;

  grad.assign(params_.size(), 0.0);
  const double* acts[3] = {a1_.data(), a2_.data(), a3_.data()};

  // Walk layers output-to-input: d_ holds dL/d(layer output) throughout.
  for (int l = 3; l >= 0; --l) {
    const Layer& layer = layers_[l];
    const double* input = l == 0 ? x : acts[l - 1];

    tposed_.resize(static_cast<size_t>(layer.fan_in) * batch);
    kern::transpose(input, tposed_.data(), batch, layer.fan_in);
    k.gemm(tposed_.data(), d_.data(), grad.data() + layer.w_off, layer.fan_in,
           batch, layer.fan_out);
    k.col_sum(d_.data(), grad.data() + layer.b_off, batch, layer.fan_out);

    if (l > 0) {
      d_prev_.resize(static_cast<size_t>(batch) * layer.fan_in);
      tposed_.resize(static_cast<size_t>(layer.fan_out) * layer.fan_in);
      kern::transpose(p + layer.w_off, tposed_.data(), layer.fan_in,
                      layer.fan_out);
      k.gemm(d_.data(), tposed_.data(), d_prev_.data(), batch, layer.fan_out,
             layer.fan_in);
      k.relu_mask(d_prev_.data(), acts[l - 1], batch * layer.fan_in);
      std::swap(d_, d_prev_);
    }
  }
  return loss;
}

double QNetwork::train_step(const double* x, const int* actions,
                            const double* targets, int batch, double lr) {
  const double loss = loss_and_gradient(x, actions, targets, batch, grad_);
  kern::ops().axpy(-lr, grad_.data(), params_.data(),
                   static_cast<int>(params_.size()));
  return loss;
}

bool QNetwork::params_finite() const {
  return !kern::ops().any_nonfinite(params_.data(),
                                    static_cast<int>(params_.size()));
}

void QNetwork::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open '", path, "' for writing");
  out.write(kMagic, sizeof kMagic);
  for (int d : dims_) {
    const std::int32_t v = d;
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  out.write(reinterpret_cast<const char*>(params_.data()),
            static_cast<std::streamsize>(params_.size() * sizeof(double)));
  out.flush();
  require(out.good(), "write to '", path, "' failed");
}

QNetwork QNetwork::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open checkpoint '", path, "'");
  char magic[8];
  in.read(magic, sizeof magic);
  require(in.good() && std::memcmp(magic, kMagic, sizeof magic) == 0,
          "'", path, "' is not a checkpoint file");
  std::int32_t d[5];
  in.read(reinterpret_cast<char*>(d), sizeof d);
  require(in.good(), "checkpoint '", path, "' is truncated");
  QNetwork net(d[0], d[1], d[2], d[3], d[4]);
  in.read(reinterpret_cast<char*>(net.params_.data()),
          static_cast<std::streamsize>(net.params_.size() * sizeof(double)));
  require(in.good(), "checkpoint '", path, "' is truncated");
  char extra;
  require(!in.read(&extra, 1), "checkpoint '", path, "' has trailing bytes");
  return net;
}

}  // namespace lbsim
