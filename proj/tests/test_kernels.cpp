#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "lbsim/kern/ops.hpp"

using namespace lbsim;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("backend dispatch and forcing") {
  const kern::Backend initial = kern::active();
  CHECK(kern::supported(kern::Backend::scalar));
  CHECK(kern::supported(initial));
  CHECK(std::string(kern::backend_name(kern::Backend::scalar)) == "scalar");
  CHECK(std::string(kern::backend_name(kern::Backend::avx2)) == "avx2");

  kern::force(kern::Backend::scalar);
  CHECK(kern::active() == kern::Backend::scalar);
  CHECK(std::string(kern::ops().name) == "scalar");

  if (kern::supported(kern::Backend::avx2)) {
    kern::force(kern::Backend::avx2);
    CHECK(kern::active() == kern::Backend::avx2);
    CHECK(std::string(kern::ops().name) == "avx2");
  } else {
    CHECK_THROWS_AS(kern::force(kern::Backend::avx2), std::runtime_error);
    CHECK_THROWS_AS(kern::ops_for(kern::Backend::avx2), std::runtime_error);
  }
  kern::force(initial);
}

TEST_CASE("scalar gemm matches a plain triple loop with fma") {
  std::mt19937_64 rng(7);
  const kern::Ops& scalar = kern::ops_for(kern::Backend::scalar);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % 8);
    const int n = 1 + static_cast<int>(rng() % 7);
    const auto a = random_vec(rng, m * k);
    const auto b = random_vec(rng, k * n);
    std::vector<double> c(m * n), ref(m * n, 0.0);
    scalar.gemm(a.data(), b.data(), c.data(), m, k, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int p = 0; p < k; ++p)
          acc = std::fma(a[i * k + p], b[p * n + j], acc);
        ref[i * n + j] = acc;
      }
    CHECK(bits_equal(c, ref));
  }
}

TEST_CASE("gemm_bias seeds the accumulation chain with the bias") {
  const kern::Ops& scalar = kern::ops_for(kern::Backend::scalar);
  // 1x1x1: c = fma(a, b, bias) exactly.
  const double a = 1.25, b = 3.5, bias = 0.125;
  double c = 0.0;
  scalar.gemm_bias(&a, &b, &bias, &c, 1, 1, 1);
  CHECK(c == std::fma(a, b, bias));
}

TEST_CASE("scalar and avx2 backends are bit-identical on every kernel") {
  if (!kern::supported(kern::Backend::avx2)) return;
  const kern::Ops& s = kern::ops_for(kern::Backend::scalar);
  const kern::Ops& v = kern::ops_for(kern::Backend::avx2);
  std::mt19937_64 rng(123);

  for (int trial = 0; trial < 80; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 9);
    const int k = 1 + static_cast<int>(rng() % 70);
    const int n = 1 + static_cast<int>(rng() % 70);
    const auto a = random_vec(rng, m * k, 2.0);
    const auto b = random_vec(rng, k * n, 2.0);
    const auto bias = random_vec(rng, n, 2.0);

    std::vector<double> c1(m * n), c2(m * n);
    s.gemm(a.data(), b.data(), c1.data(), m, k, n);
    v.gemm(a.data(), b.data(), c2.data(), m, k, n);
    CHECK(bits_equal(c1, c2));

    s.gemm_bias(a.data(), b.data(), bias.data(), c1.data(), m, k, n);
    v.gemm_bias(a.data(), b.data(), bias.data(), c2.data(), m, k, n);
    CHECK(bits_equal(c1, c2));

    auto x1 = random_vec(rng, m * n, 3.0);
    auto x2 = x1;
    s.relu(x1.data(), m * n);
    v.relu(x2.data(), m * n);
    CHECK(bits_equal(x1, x2));

    auto g1 = random_vec(rng, m * n, 3.0);
    auto g2 = g1;
    const auto act = random_vec(rng, m * n, 1.0);
    s.relu_mask(g1.data(), act.data(), m * n);
    v.relu_mask(g2.data(), act.data(), m * n);
    CHECK(bits_equal(g1, g2));

    auto y1 = random_vec(rng, k * n);
    auto y2 = y1;
    const auto xv = random_vec(rng, k * n);
    s.axpy(-0.01, xv.data(), y1.data(), k * n);
    v.axpy(-0.01, xv.data(), y2.data(), k * n);
    CHECK(bits_equal(y1, y2));

    std::vector<double> cs1(k), cs2(k);
    s.col_sum(a.data(), cs1.data(), m, k);
    v.col_sum(a.data(), cs2.data(), m, k);
    CHECK(bits_equal(cs1, cs2));

    CHECK(s.any_nonfinite(a.data(), m * k) == v.any_nonfinite(a.data(), m * k));
  }
}

TEST_CASE("relu zeroes exactly the non-positive entries") {
  const kern::Ops& s = kern::ops_for(kern::Backend::scalar);
  std::vector<double> x = {-1.0, 0.0, 1.5, -0.0, 2.0, -3.25, 1e-300};
  s.relu(x.data(), static_cast<int>(x.size()));
  const std::vector<double> expect = {0.0, 0.0, 1.5, 0.0, 2.0, 0.0, 1e-300};
  CHECK(bits_equal(x, expect));
}

TEST_CASE("relu_mask gates gradients by activation sign") {
  const kern::Ops& s = kern::ops_for(kern::Backend::scalar);
  std::vector<double> g = {5.0, 6.0, 7.0, 8.0};
  const std::vector<double> act = {1.0, 0.0, -2.0, 0.5};
  s.relu_mask(g.data(), act.data(), 4);
  const std::vector<double> expect = {5.0, 0.0, 0.0, 8.0};
  CHECK(bits_equal(g, expect));
}

TEST_CASE("col_sum accumulates rows in ascending order") {
  const kern::Ops& s = kern::ops_for(kern::Backend::scalar);
  // 3x2 matrix; expected value written as the explicit ascending chain.
  const std::vector<double> a = {0.1, 1.0, 0.2, 2.0, 0.3, 3.0};
  std::vector<double> out(2);
  s.col_sum(a.data(), out.data(), 3, 2);
  CHECK(out[0] == ((0.1 + 0.2) + 0.3));
  CHECK(out[1] == ((1.0 + 2.0) + 3.0));
}

TEST_CASE("any_nonfinite detects NaN and infinities anywhere") {
  const kern::Ops& s = kern::ops_for(kern::Backend::scalar);
  std::vector<double> x(37, 1.0);
  CHECK_FALSE(s.any_nonfinite(x.data(), 37));
  x[36] = std::numeric_limits<double>::quiet_NaN();
  CHECK(s.any_nonfinite(x.data(), 37));
  x[36] = -std::numeric_limits<double>::infinity();
  CHECK(s.any_nonfinite(x.data(), 37));
  x[36] = std::numeric_limits<double>::max();
  CHECK_FALSE(s.any_nonfinite(x.data(), 37));
}

TEST_CASE("transpose round-trips") {
  std::mt19937_64 rng(5);
  const auto a = random_vec(rng, 6 * 11);
  std::vector<double> b(11 * 6), c(6 * 11);
  kern::transpose(a.data(), b.data(), 6, 11);
  kern::transpose(b.data(), c.data(), 11, 6);
  CHECK(bits_equal(a, c));
  CHECK(b[3 * 6 + 2] == a[2 * 11 + 3]);
}
