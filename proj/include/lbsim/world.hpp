#pragma once

#include <deque>
#include <set>
#include <vector>

#include "lbsim/config.hpp"
#include "lbsim/trace.hpp"

// The discrete-time environment: base stations with round-robin queues, UEs
// with positions and demands, and the per-epoch step that schedules a full
// minute of TTIs and scores every UE. Attachment changes only between
// epochs, through apply_handover.

namespace lbsim {

struct UserEquipment {
  int id;
  double x_m, y_m;
  Zone zone;
  int serving_bs;
  double demand_bits;           // this epoch's demand
  double rb_mean_last_epoch;    // mean RBs per TTI obtained last epoch
};

struct BaseStationState {
  int id;
  double x_m, y_m;
  int rb_budget;
  std::set<int> attached;
  std::deque<int> rr_queue;  // always a permutation of attached

  int load() const { return static_cast<int>(attached.size()); }
};

struct UeEpochOutcome {
  int serving_bs;
  long rb_ttis;             // summed RB grants over the epoch
  double rb_mean_per_tti;
  double sinr_db;           // toward the serving BS
  double achieved_rate_bps;
  double achieved_bits;
  double demand_bits;
  double qos;               // min(achieved, demand) / demand; 1 if demand 0
};

struct EpochReport {
  int epoch;
  std::vector<UeEpochOutcome> per_ue;
  std::vector<int> bs_load;
};

// Shannon-style link rate: n_rb * rb_bw * log2(1 + sinr) bits/s. n_rb may be
// a per-TTI average, so it is real-valued.
double achieved_rate(double n_rb, double sinr_linear, double rb_bw_hz);

class World {
 public:
  // Keeps its own copy of the trace. Builds BSs from the config and UEs
  // from the trace's first epoch; initial
  // attachment is strongest-received-power (lowest index on ties) for every
  // policy, so compared runs start from the same association.
  World(const SimConfig& cfg, const Trace& trace);

  // Back to the epoch-0 state: positions, demands, attachment, queues.
  void reset_episode();

  const SimConfig& cfg() const { return cfg_; }
  int epoch() const { return epoch_; }
  const std::vector<UserEquipment>& ues() const { return ues_; }
  const std::vector<BaseStationState>& bss() const { return bss_; }
  std::vector<int> loads() const;

  // Received power from every BS at a map position, in dBm.
  std::vector<double> rxp_dbm_at(double x_m, double y_m) const;

  // Candidate SINR toward every BS for this UE at its current position (dB),
  // honoring the configured interference mode.
  std::vector<double> candidate_sinr_db(const UserEquipment& ue) const;

  // Moves the UE's attachment; it leaves its old queue slot and joins the
  // target queue's tail. Only legal between epochs.
  void apply_handover(int ue_id, int target_bs);

  // One decision epoch: adopt this epoch's trace rows, run the round-robin
  // schedule for every BS over the full TTI count, score every UE, advance
  // the clock.
  EpochReport run_epoch();

  // Throws unless every UE is attached exactly once and every queue matches
  // its BS's attachment set.
  void check_census() const;

 private:
  void attach_initial();

  SimConfig cfg_;
  Trace trace_;
  std::vector<UserEquipment> ues_;
  std::vector<BaseStationState> bss_;
  int epoch_ = 0;
};

}  // namespace lbsim
