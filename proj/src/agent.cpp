#include "lbsim/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lbsim/util.hpp"

namespace lbsim {

std::vector<double> build_state(const std::vector<double>& sinr_db,
                                double rb_mean_last_epoch,
                                const std::vector<int>& loads, int rb_per_bs,
                                int num_ue) {
  const size_t m = sinr_db.size();
  require(m > 0 && loads.size() == m, "state needs ", m, " SINRs and loads, got ",
          loads.size(), " loads");
  require(rb_per_bs > 0 && num_ue > 0, "bad normalization constants");
  std::vector<double> s;
  s.reserve(2 * m + 1);
  for (double db : sinr_db) {
    require(std::isfinite(db), "non-finite SINR in state");
    s.push_back(std::clamp(db / 50.0, -1.0, 1.0));
  }
  s.push_back(rb_mean_last_epoch / rb_per_bs);
  for (int l : loads) s.push_back(static_cast<double>(l) / num_ue);
  return s;
}

int argmax_q(const double* q, int m) {
  require(m > 0, "argmax over an empty action set");
  int best = 0;
  for (int j = 1; j < m; ++j)
    if (q[j] > q[best]) best = j;
  return best;
}

int select_action(const QNetwork& net, const std::vector<double>& s,
                  double epsilon, Rng& rng) {
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must be in [0,1]");
  const int m = net.out_dim();
  if (rng.uniform01() < epsilon) {
    const auto q = net.forward_one(s);
    return argmax_q(q.data(), m);
  }
  return rng.uniform_int(m);
}

double td_target(double reward, const std::vector<double>& s_next,
                 const QNetwork& target_net, double gamma) {
  require(gamma >= 0.0 && gamma < 1.0, "gamma must be in [0,1)");
  const auto q = target_net.forward_one(s_next);
  return reward + gamma * q[argmax_q(q.data(), target_net.out_dim())];
}

Agent::Agent(int ue_id, int num_bs, const Hyperparams& hp,
             std::uint64_t master_seed)
    : ue_id_(ue_id),
      m_(num_bs),
      hp_(hp),
      rng_(derive_seed(master_seed, kStreamAgent,
                       static_cast<std::uint64_t>(ue_id))),
      net_(2 * num_bs + 1, hp.hidden1, hp.hidden2, hp.hidden3, num_bs),
      target_(2 * num_bs + 1, hp.hidden1, hp.hidden2, hp.hidden3, num_bs),
      buffer_(hp.memory_capacity) {
  net_.init_uniform(rng_);
  target_.copy_params_from(net_);
}

int Agent::decide(const std::vector<double>& state, bool greedy) {
  if (greedy) {
    const auto q = net_.forward_one(state);
    return argmax_q(q.data(), m_);
  }
  return select_action(net_, state, hp_.epsilon, rng_);
}

void Agent::observe(const std::vector<double>& s, int a, double r,
                    const std::vector<double>& s_next) {
  require(a >= 0 && a < m_, "observed action ", a, " out of range");
  require(std::isfinite(r), "non-finite reward");
  buffer_.push(Experience{s, a, r, s_next});
}

double Agent::train() {
  if (!buffer_.ready(hp_.batch_size)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const int batch = hp_.batch_size;
  const int in = net_.in_dim();
  const auto sampled = buffer_.sample(batch, rng_);

  xs_.resize(static_cast<size_t>(batch) * in);
  xs_next_.resize(static_cast<size_t>(batch) * in);
  actions_.resize(batch);
  targets_.resize(batch);
  q_next_.resize(static_cast<size_t>(batch) * m_);
  for (int b = 0; b < batch; ++b) {
    const Experience& e = *sampled[b];
    require(static_cast<int>(e.s.size()) == in &&
                static_cast<int>(e.s_next.size()) == in,
            "stored experience has the wrong state size");
    std::copy(e.s.begin(), e.s.end(), xs_.begin() + static_cast<size_t>(b) * in);
    std::copy(e.s_next.begin(), e.s_next.end(),
              xs_next_.begin() + static_cast<size_t>(b) * in);
    actions_[b] = e.a;
  }
  target_.forward(xs_next_.data(), batch, q_next_.data());
  for (int b = 0; b < batch; ++b) {
    const double* row = q_next_.data() + static_cast<size_t>(b) * m_;
    targets_[b] = sampled[b]->r + hp_.gamma * row[argmax_q(row, m_)];
  }

  const double loss = net_.train_step(xs_.data(), actions_.data(),
                                      targets_.data(), batch,
                                      hp_.learning_rate);
  ++train_steps_;
  if (train_steps_ % hp_.target_sync_interval == 0)
    target_.copy_params_from(net_);
  require(net_.params_finite(), "ue ", ue_id_,
          ": network parameters left the finite range after train step ",
          train_steps_);
  return loss;
}

}  // namespace lbsim
