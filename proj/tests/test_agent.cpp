#include <cmath>
#include <vector>

#include "doctest.h"
#include "lbsim/agent.hpp"

using namespace lbsim;

namespace {

Hyperparams small_hp() {
  Hyperparams hp;
  hp.memory_capacity = 24;
  hp.batch_size = 6;
  hp.target_sync_interval = 3;
  hp.hidden1 = 8;
  hp.hidden2 = 8;
  hp.hidden3 = 4;
  return hp;
}

}  // namespace

TEST_CASE("the state vector is the normalized observation, dimension 2m+1") {
  const std::vector<double> sinr = {10.0, -25.0};
  const std::vector<int> loads = {3, 17};
  const auto s = build_state(sinr, 12.5, loads, 50, 20);
  REQUIRE(s.size() == 5);
  CHECK(s[0] == 10.0 / 50.0);
  CHECK(s[1] == -0.5);
  CHECK(s[2] == 0.25);   // 12.5 rbs over a 50-rb budget
  CHECK(s[3] == 0.15);   // 3 of 20 users
  CHECK(s[4] == 0.85);
}

TEST_CASE("extreme link qualities clamp to the unit range") {
  const std::vector<double> sinr = {100.0, -100.0, 50.0, -50.0};
  const auto s = build_state(sinr, 0.0, {0, 0, 0, 0}, 50, 20);
  CHECK(s[0] == 1.0);
  CHECK(s[1] == -1.0);
  CHECK(s[2] == 1.0);
  CHECK(s[3] == -1.0);
}

TEST_CASE("argmax breaks ties toward the lowest index") {
  const double q1[] = {1.0, 3.0, 3.0, 2.0};
  CHECK(argmax_q(q1, 4) == 1);
  const double q2[] = {-5.0, -5.0, -5.0};
  CHECK(argmax_q(q2, 3) == 0);
  const double q3[] = {0.0, 2.0, 7.0};
  CHECK(argmax_q(q3, 3) == 2);
}

TEST_CASE("epsilon one always exploits") {
  QNetwork net(5, 8, 8, 4, 3);
  Rng init(1);
  net.init_uniform(init);
  const std::vector<double> s = {0.1, 0.2, -0.3, 0.4, 0.5};
  const auto q = net.forward_one(s);
  const int best = argmax_q(q.data(), 3);
  Rng rng(55);
  for (int i = 0; i < 200; ++i) {
    CHECK(select_action(net, s, 1.0, rng) == best);
  }
}

TEST_CASE("epsilon zero explores uniformly within four sigma") {
  QNetwork net(5, 8, 8, 4, 4);  // zero params: all Q equal
  const std::vector<double> s = {0.1, 0.2, -0.3, 0.4, 0.5};
  Rng rng(77);
  std::vector<int> counts(4, 0);
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    const int a = select_action(net, s, 0.0, rng);
    REQUIRE(a >= 0);
    REQUIRE(a < 4);
    ++counts[a];
  }
  const double expect = draws / 4.0;
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (int a = 0; a < 4; ++a) {
    CHECK(std::abs(counts[a] - expect) < 4.0 * sigma);
  }
}

TEST_CASE("mid-range epsilon mixes the two branches at the stated rate") {
  // Zero network: exploitation always picks action 0; exploration picks
  // uniformly. With epsilon 0.8 and 4 actions, P(action 0) = 0.8 + 0.2/4.
  QNetwork net(3, 4, 4, 2, 4);
  const std::vector<double> s = {0.3, -0.2, 0.9};
  Rng rng(1234);
  const int draws = 50000;
  int zeros = 0;
  for (int i = 0; i < draws; ++i) {
    if (select_action(net, s, 0.8, rng) == 0) ++zeros;
  }
  const double p = 0.8 + 0.2 / 4.0;
  const double sigma = std::sqrt(draws * p * (1 - p));
  CHECK(std::abs(zeros - draws * p) < 4.0 * sigma);
}

TEST_CASE("the td target reads the frozen target network") {
  QNetwork target(5, 4, 4, 2, 2);  // zero params
  // Push the output biases to Q(s') = [5, 3] for every input.
  target.params()[target.param_count() - 2] = 5.0;
  target.params()[target.param_count() - 1] = 3.0;
  const std::vector<double> s_next = {0.1, 0.1, 0.1, 0.1, 0.1};
  CHECK(td_target(10.0, s_next, target, 0.9) == 14.5);
  CHECK(td_target(0.0, s_next, target, 0.9) == 4.5);
  CHECK(td_target(-2.0, s_next, target, 0.0) == -2.0);
}

TEST_CASE("greedy decisions consume no randomness") {
  const Hyperparams hp = small_hp();
  Agent a(3, 4, hp, 99);
  Agent b(3, 4, hp, 99);
  const std::vector<double> s(2 * 4 + 1, 0.25);
  // Agent a burns greedy decisions first; if they drew, the streams would
  // diverge and the exploratory decisions below would differ.
  for (int i = 0; i < 50; ++i) (void)a.decide(s, true);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.decide(s, false) == b.decide(s, false));
  }
}

TEST_CASE("training before the buffer is ready is a silent no-op") {
  const Hyperparams hp = small_hp();
  Agent a(0, 4, hp, 7);
  Agent b(0, 4, hp, 7);
  const std::vector<double> s(9, 0.5);
  // Not enough experiences: train must not touch the RNG stream.
  for (int i = 0; i < 5; ++i) {
    CHECK(std::isnan(a.train()));
  }
  CHECK(a.train_steps() == 0);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.decide(s, false) == b.decide(s, false));
  }
}

TEST_CASE("training runs once ready, syncs the target on schedule") {
  const Hyperparams hp = small_hp();  // batch 6, sync every 3
  Agent agent(1, 2, hp, 31);
  const std::vector<double> s = {0.2, 0.4, 0.1, 0.3, 0.5};
  const std::vector<double> s2 = {0.1, -0.4, 0.2, 0.6, 0.2};
  for (int i = 0; i < 6; ++i) {
    agent.observe(s, i % 2, 1.0 + i, s2);
  }
  CHECK(agent.buffer().size() == 6);

  const double loss1 = agent.train();
  CHECK(std::isfinite(loss1));
  CHECK(agent.train_steps() == 1);
  // After one step the online net has moved away from the target copy.
  CHECK(agent.net().params() != agent.target_net().params());

  (void)agent.train();
  (void)agent.train();  // third step: sync interval reached
  CHECK(agent.train_steps() == 3);
  CHECK(agent.net().params() == agent.target_net().params());

  (void)agent.train();
  CHECK(agent.net().params() != agent.target_net().params());
}

TEST_CASE("identically seeded agents evolve bit-identically") {
  const Hyperparams hp = small_hp();
  Agent a(2, 3, hp, 5);
  Agent b(2, 3, hp, 5);
  Rng data(9);
  const int dim = 2 * 3 + 1;
  for (int i = 0; i < 40; ++i) {
    std::vector<double> s(dim), s2(dim);
    for (double& v : s) v = data.uniform(-1.0, 1.0);
    for (double& v : s2) v = data.uniform(-1.0, 1.0);
    const int act_a = a.decide(s, false);
    const int act_b = b.decide(s, false);
    CHECK(act_a == act_b);
    const double r = data.uniform(0.0, 5.0);
    a.observe(s, act_a, r, s2);
    b.observe(s, act_b, r, s2);
    const double la = a.train();
    const double lb = b.train();
    CHECK(((std::isnan(la) && std::isnan(lb)) || la == lb));
  }
  CHECK(a.net().params() == b.net().params());
  CHECK(a.target_net().params() == b.target_net().params());
}

TEST_CASE("agents with different ids draw different streams") {
  const Hyperparams hp = small_hp();
  Agent a(0, 3, hp, 5);
  Agent b(1, 3, hp, 5);
  CHECK(a.net().params() != b.net().params());
}
