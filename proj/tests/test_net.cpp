#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "lbsim/net.hpp"
#include "lbsim/rng.hpp"

using namespace lbsim;

namespace {

std::string temp_file(const char* stem) {
  static int counter = 0;
  return (std::filesystem::temp_directory_path() /
          (std::string(stem) + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++)))
      .string();
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("an all-zero network outputs zero everywhere") {
  QNetwork net(9, 8, 8, 4, 4);
  const std::vector<double> s = {1, -1, 0.5, 0.25, -0.75, 0, 1, 1, -1};
  const std::vector<double> q = net.forward_one(s);
  REQUIRE(q.size() == 4);
  for (double v : q) CHECK(v == 0.0);
}

TEST_CASE("a single-unit chain computes the hand-traced value") {
  QNetwork net(1, 1, 1, 1, 1);
  REQUIRE(net.param_count() == 8);
  // Layout [W1|b1|W2|b2|W3|b3|W4|b4]; every weight 2, every bias 0.5.
  for (int i = 0; i < 8; ++i) net.params()[i] = (i % 2 == 0) ? 2.0 : 0.5;

  // x=0.25: 0.25 -> relu(1.0) -> relu(2.5) -> relu(5.5) -> 2*5.5+0.5 = 11.5
  CHECK(net.forward_one({0.25})[0] == 11.5);
  // x=-1: first layer cut by the rectifier, then biases carry through:
  // relu(-1.5)=0 -> relu(0.5) -> relu(1.5) -> 2*1.5+0.5 = 3.5
  CHECK(net.forward_one({-1.0})[0] == 3.5);
}

TEST_CASE("forward is pure and batch rows match single evaluation") {
  QNetwork net(5, 8, 8, 4, 3);
  Rng rng(31);
  net.init_uniform(rng);
  Rng data(7);
  std::vector<double> x(4 * 5);
  for (double& v : x) v = data.uniform(-1.0, 1.0);

  std::vector<double> q1(4 * 3), q2(4 * 3);
  net.forward(x.data(), 4, q1.data());
  net.forward(x.data(), 4, q2.data());
  CHECK(same_bits(q1, q2));

  for (int row = 0; row < 4; ++row) {
    const std::vector<double> s(x.begin() + row * 5, x.begin() + (row + 1) * 5);
    const std::vector<double> q = net.forward_one(s);
    for (int j = 0; j < 3; ++j) CHECK(q[j] == q1[row * 3 + j]);
  }
}

TEST_CASE("initialization is deterministic, bounded, and zero-biased") {
  QNetwork a(9, 64, 64, 32, 4), b(9, 64, 64, 32, 4);
  Rng ra(99), rb(99);
  a.init_uniform(ra);
  b.init_uniform(rb);
  CHECK(same_bits(a.params(), b.params()));

  // Spot-check the first layer: weights inside +-sqrt(6/(9+64)), bias zero.
  const double bound1 = std::sqrt(6.0 / (9 + 64));
  for (int i = 0; i < 9 * 64; ++i) {
    CHECK(std::abs(a.params()[i]) <= bound1);
  }
  for (int i = 0; i < 64; ++i) CHECK(a.params()[9 * 64 + i] == 0.0);

  Rng rc(100);
  QNetwork c(9, 64, 64, 32, 4);
  c.init_uniform(rc);
  CHECK_FALSE(same_bits(a.params(), c.params()));
}

TEST_CASE("checkpoints round-trip bit-exactly") {
  QNetwork net(7, 16, 16, 8, 4);
  Rng rng(5);
  net.init_uniform(rng);
  const std::string path = temp_file("qnet");
  net.save(path);
  const QNetwork back = QNetwork::load(path);
  CHECK(back.dims() == net.dims());
  CHECK(same_bits(back.params(), net.params()));
  const std::vector<double> s = {0.1, -0.2, 0.3, -0.4, 0.5, -0.6, 0.7};
  CHECK(net.forward_one(s) == back.forward_one(s));
  std::filesystem::remove(path);
}

TEST_CASE("loading garbage fails") {
  const std::string path = temp_file("qnet_bad");
  {
    std::ofstream out(path, std::ios::binary);
    out << "this is not a checkpoint";
  }
  CHECK_THROWS_AS(QNetwork::load(path), std::exception);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(QNetwork::load("/nonexistent/q.bin"), std::exception);
}

TEST_CASE("zero-network gradient touches only the output bias of taken actions") {
  QNetwork net(3, 4, 4, 2, 3);
  const std::vector<double> x = {0.5, -0.5, 1.0};
  const int action = 1;
  const double target = 2.0;
  std::vector<double> grad;
  const double loss = net.loss_and_gradient(x.data(), &action, &target, 1, grad);
  // Q is identically zero, so loss = (0 - 2)^2 = 4.
  CHECK(loss == 4.0);
  REQUIRE(static_cast<int>(grad.size()) == net.param_count());
  // Output bias of action 1: d = 2*(0-2) = -4. Everything else zero because
  // all activations are zero.
  const int b4_off = net.param_count() - 3;
  for (int i = 0; i < net.param_count(); ++i) {
    if (i == b4_off + 1) {
      CHECK(grad[i] == -4.0);
    } else {
      CHECK(grad[i] == 0.0);
    }
  }
}

TEST_CASE("train_step descends the squared temporal-difference error") {
  QNetwork net(6, 10, 10, 6, 3);
  Rng rng(17);
  net.init_uniform(rng);
  const int batch = 4;
  std::vector<double> x(batch * 6);
  Rng data(3);
  for (double& v : x) v = data.uniform(-1.0, 1.0);
  const std::vector<int> actions = {0, 2, 1, 2};
  const std::vector<double> targets = {1.0, -0.5, 0.25, 2.0};

  const double initial = net.train_step(x.data(), actions.data(),
                                        targets.data(), batch, 0.05);
  double last = initial;
  for (int it = 0; it < 300; ++it) {
    last = net.train_step(x.data(), actions.data(), targets.data(), batch,
                          0.05);
  }
  CHECK(last < initial);
  CHECK(last < 1e-3);
}

TEST_CASE("analytic gradients match central finite differences") {
  QNetwork net(4, 5, 5, 3, 2);
  Rng rng(23);
  net.init_uniform(rng);
  const int batch = 3;
  std::vector<double> x(batch * 4);
  Rng data(29);
  for (double& v : x) v = data.uniform(-1.0, 1.0);
  const std::vector<int> actions = {1, 0, 1};
  const std::vector<double> targets = {0.7, -0.3, 1.1};

  std::vector<double> grad;
  net.loss_and_gradient(x.data(), actions.data(), targets.data(), batch, grad);

  auto loss_at = [&]() {
    std::vector<double> g;
    return net.loss_and_gradient(x.data(), actions.data(), targets.data(),
                                 batch, g);
  };
  const double step = 1e-6;
  for (int i = 0; i < net.param_count(); i += 7) {
    const double keep = net.params()[i];
    net.params()[i] = keep + step;
    const double up = loss_at();
    net.params()[i] = keep - step;
    const double down = loss_at();
    net.params()[i] = keep;
    const double numeric = (up - down) / (2.0 * step);
    CHECK(grad[i] == doctest::Approx(numeric).epsilon(1e-5).scale(
                         std::max(1.0, std::abs(numeric))));
  }
}

TEST_CASE("non-finite parameters are detected") {
  QNetwork net(3, 4, 4, 2, 2);
  CHECK(net.params_finite());
  net.params()[10] = std::numeric_limits<double>::infinity();
  CHECK_FALSE(net.params_finite());
  net.params()[10] = 0.0;
  net.params()[net.param_count() - 1] = std::nan("");
  CHECK_FALSE(net.params_finite());
}
