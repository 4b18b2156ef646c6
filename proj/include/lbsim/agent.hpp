#pragma once

#include <cstdint>
#include <vector>

#include "lbsim/config.hpp"
#include "lbsim/net.hpp"
#include "lbsim/replay.hpp"
#include "lbsim/rng.hpp"

// The per-UE learner: its value network and target copy, replay memory, the
// state encoding, action selection, and the temporal-difference update.
// Agents are fully isolated — each owns its parameters, buffer, and RNG
// stream — and exchange nothing beyond the coordinator's broadcast loads.

namespace lbsim {

// Normalized observation, dimension 2m+1 for m base stations: the SINR
// toward every BS (dB mapped by clamp(dB/50, -1, 1)), the UE's own mean RB
// grant (divided by the BS budget), and every BS load (divided by the UE
// count).
std::vector<double> build_state(const std::vector<double>& sinr_db,
                                double rb_mean_last_epoch,
                                const std::vector<int>& loads, int rb_per_bs,
                                int num_ue);

// Argmax with ties broken toward the lowest index.
int argmax_q(const double* q, int m);

// Action selection with the inverted-epsilon convention used throughout:
// probability epsilon exploits (argmax), probability 1-epsilon explores
// uniformly. Consumes one uniform draw, plus one more on the explore branch.
int select_action(const QNetwork& net, const std::vector<double>& s,
                  double epsilon, Rng& rng);

// r + gamma * max_j Q(s', a_j | target); reads the frozen target parameters,
// never the online ones.
double td_target(double reward, const std::vector<double>& s_next,
                 const QNetwork& target_net, double gamma);

class Agent {
 public:
  Agent(int ue_id, int num_bs, const Hyperparams& hp,
        std::uint64_t master_seed);

  int ue_id() const { return ue_id_; }
  const QNetwork& net() const { return net_; }
  const QNetwork& target_net() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  long train_steps() const { return train_steps_; }

  // greedy = pure argmax with no RNG draw (evaluation episodes).
  int decide(const std::vector<double>& state, bool greedy);

  void observe(const std::vector<double>& s, int a, double r,
               const std::vector<double>& s_next);

  // One batch update if the buffer is ready, else a no-op that consumes no
  // randomness. Returns the pre-step loss, or NaN when skipped. Syncs the
  // target every hp.target_sync_interval steps and refuses to continue if
  // any parameter leaves the finite range.
  double train();

 private:
  int ue_id_;
  int m_;
  Hyperparams hp_;
  Rng rng_;
  QNetwork net_;
  QNetwork target_;
  ReplayBuffer buffer_;
  long train_steps_ = 0;

  // batch assembly scratch
  std::vector<double> xs_, xs_next_, q_next_, targets_;
  std::vector<int> actions_;
};

}  // namespace lbsim
