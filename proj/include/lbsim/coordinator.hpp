#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lbsim/agent.hpp"
#include "lbsim/world.hpp"

// The controller that stands in for the near-real-time RIC app: it keeps the
// authoritative load table, broadcasts it to every UE each epoch, validates
// and serializes handover requests, and drives the epoch protocol:
//   (1) broadcast loads, (2) every UE observes and submits a target,
//   (3) requests validated and executed in ascending UE order against the
//   live table, (4) the environment runs the epoch, (5) rewards delivered,
//   (6) agents train.
// Every message can be mirrored to an event log, one line per message, from
// which all reported counters are independently recomputable.

namespace lbsim {

struct LoadMessage {
  int epoch;
  std::vector<int> loads;
};

struct LoadTable {
  int stamp = -1;  // epoch of the last broadcast; strictly increasing
  std::vector<int> loads;
};

struct HandoverRequest {
  int ue_id;
  int current_bs;  // the attachment the UE believes it has
  int target_bs;
  int epoch;
};

enum class VerdictCode { ok, no_op, stale_state, over_capacity };

const char* verdict_name(VerdictCode code);

struct Verdict {
  VerdictCode code;
  bool accepted() const { return code == VerdictCode::ok; }
};

// What one UE knows when it decides: its own link qualities and grant
// history plus the broadcast loads. Policies see nothing else.
struct Observation {
  int epoch;
  int ue_id;
  int serving_bs;
  std::vector<double> sinr_db;
  double rb_mean_last_epoch;
  std::vector<int> loads;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual const char* name() const = 0;
  virtual void begin_episode(bool eval) { (void)eval; }
  virtual int choose(const Observation& obs) = 0;
  virtual void observe(const Observation& prev, int action,
                       const UeEpochOutcome& outcome, const Observation& next) {
    (void)prev, (void)action, (void)outcome, (void)next;
  }
  virtual void train_all() {}
};

// One learning agent per UE; evaluation episodes switch every agent to pure
// argmax and suspend experience collection and training.
class DqnPolicy : public Policy {
 public:
  DqnPolicy(const SimConfig& cfg, std::uint64_t master_seed);
  const char* name() const override { return "dqn"; }
  void begin_episode(bool eval) override { eval_ = eval; }
  int choose(const Observation& obs) override;
  void observe(const Observation& prev, int action,
               const UeEpochOutcome& outcome, const Observation& next) override;
  void train_all() override;
  const std::vector<Agent>& agents() const { return agents_; }

 private:
  SimConfig cfg_;
  bool eval_ = false;
  std::vector<Agent> agents_;
};

// The load-blind comparison policy.
class BaselinePolicy : public Policy {
 public:
  explicit BaselinePolicy(double hysteresis_db)
      : hysteresis_db_(hysteresis_db) {}
  const char* name() const override { return "max_sinr"; }
  int choose(const Observation& obs) override;

 private:
  double hysteresis_db_;
};

class Coordinator {
 public:
  explicit Coordinator(World& world, std::ostream* event_log = nullptr);

  const LoadTable& table() const { return table_; }
  long handovers() const { return handovers_; }

  // Snapshot of the current loads for every UE. Refuses to broadcast a table
  // whose loads do not sum to the UE count; stamps strictly increase.
  LoadMessage broadcast_loads();

  // no_op when target equals current; stale_state when the request's claimed
  // attachment disagrees with the coordinator's record; over_capacity when a
  // configured ceiling would be exceeded; otherwise ok.
  Verdict validate_request(const HandoverRequest& req) const;

  // Pre: the request validates ok (checked again here).
  void execute_handover(const HandoverRequest& req);

  // Writes the starting attachment to the event log with epoch label -1.
  void log_initial_attachment();

  EpochReport run_epoch_protocol(Policy& policy);

 private:
  Observation make_observation(int ue_id, int epoch,
                               const std::vector<int>& loads) const;
  void log_attachment(int epoch_label, const char* type);

  World& world_;
  std::ostream* log_;
  LoadTable table_;
  long handovers_ = 0;
};

struct EpisodeResult {
  long handovers = 0;
  double mean_qos = 0.0;        // over every (epoch, UE) pair
  double delivered_bits = 0.0;  // demand-capped
  double achieved_bits = 0.0;   // uncapped
  std::vector<EpochReport> reports;
};

// One full pass over the trace horizon. Resets the world, then runs the
// epoch protocol to the horizon; the policy is told whether this episode is
// an evaluation pass.
EpisodeResult run_episode(World& world, Policy& policy, bool eval,
                          std::ostream* event_log = nullptr);

}  // namespace lbsim
