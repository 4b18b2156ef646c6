#include "lbsim/coordinator.hpp"

#include <algorithm>
#include <ostream>

#include "lbsim/baseline.hpp"
#include "lbsim/util.hpp"

namespace lbsim {

const char* verdict_name(VerdictCode code) {
  switch (code) {
    case VerdictCode::ok: return "ok";
    case VerdictCode::no_op: return "no_op";
    case VerdictCode::stale_state: return "stale_state";
    case VerdictCode::over_capacity: return "over_capacity";
  }
  return "?";
}

DqnPolicy::DqnPolicy(const SimConfig& cfg, std::uint64_t master_seed)
    : cfg_(cfg) {
  agents_.reserve(cfg_.num_ue);
  for (int u = 0; u < cfg_.num_ue; ++u)
    agents_.emplace_back(u, cfg_.num_bs, cfg_.hp, master_seed);
}

int DqnPolicy::choose(const Observation& obs) {
  const auto state = build_state(obs.sinr_db, obs.rb_mean_last_epoch,
                                 obs.loads, cfg_.rb_per_bs, cfg_.num_ue);
  return agents_[obs.ue_id].decide(state, eval_);
}

void DqnPolicy::observe(const Observation& prev, int action,
                        const UeEpochOutcome& outcome,
                        const Observation& next) {
  if (eval_) return;  // evaluation pass: no experience collection
  const auto s = build_state(prev.sinr_db, prev.rb_mean_last_epoch, prev.loads,
                             cfg_.rb_per_bs, cfg_.num_ue);
  const auto s_next = build_state(next.sinr_db, next.rb_mean_last_epoch,
                                  next.loads, cfg_.rb_per_bs, cfg_.num_ue);
  double rate = outcome.achieved_rate_bps;
  if (cfg_.reward_demand_capped && outcome.demand_bits > 0.0)
    rate = std::min(rate, outcome.demand_bits / cfg_.epoch_seconds());
  agents_[prev.ue_id].observe(s, action, rate / cfg_.reward_scale_bps, s_next);
}

void DqnPolicy::train_all() {
  if (eval_) return;
  for (auto& agent : agents_) agent.train();
}

int BaselinePolicy::choose(const Observation& obs) {
  return max_sinr_action(obs.sinr_db, obs.serving_bs, hysteresis_db_);
}

Coordinator::Coordinator(World& world, std::ostream* event_log)
    : world_(world), log_(event_log) {
  table_.loads = world_.loads();
}

LoadMessage Coordinator::broadcast_loads() {
  const auto loads = world_.loads();
  long sum = 0;
  for (int l : loads) sum += l;
  require(sum == world_.cfg().num_ue, "refusing to broadcast: loads sum to ",
          sum, ", expected ", world_.cfg().num_ue);
  require(world_.epoch() > table_.stamp,
          "broadcast stamp must increase: epoch ", world_.epoch(),
          " after stamp ", table_.stamp);
  table_.stamp = world_.epoch();
  table_.loads = loads;
  return LoadMessage{table_.stamp, table_.loads};
}

Verdict Coordinator::validate_request(const HandoverRequest& req) const {
  require(req.ue_id >= 0 && req.ue_id < world_.cfg().num_ue, "unknown ue ",
          req.ue_id);
  require(req.target_bs >= 0 && req.target_bs < world_.cfg().num_bs,
          "request names BS ", req.target_bs, " which does not exist");
  if (req.target_bs == req.current_bs) return Verdict{VerdictCode::no_op};
  if (req.current_bs != world_.ues()[req.ue_id].serving_bs)
    return Verdict{VerdictCode::stale_state};
  const int cap = world_.cfg().max_attached_per_bs;
  if (cap > 0 && table_.loads[req.target_bs] + 1 > cap)
    return Verdict{VerdictCode::over_capacity};
  return Verdict{VerdictCode::ok};
}

void Coordinator::execute_handover(const HandoverRequest& req) {
  require(validate_request(req).accepted(),
          "refusing to execute an unvalidated handover for ue ", req.ue_id);
  world_.apply_handover(req.ue_id, req.target_bs);
  --table_.loads[req.current_bs];
  ++table_.loads[req.target_bs];
  ++handovers_;
}

void Coordinator::log_attachment(int epoch_label, const char* type) {
  if (!log_) return;
  *log_ << epoch_label << ',' << type;
  for (const auto& ue : world_.ues()) *log_ << ',' << ue.serving_bs;
  *log_ << '\n';
}

void Coordinator::log_initial_attachment() { log_attachment(-1, "attach"); }

Observation Coordinator::make_observation(int ue_id, int epoch,
                                          const std::vector<int>& loads) const {
  const UserEquipment& ue = world_.ues()[ue_id];
  return Observation{epoch,          ue_id, ue.serving_bs,
                     world_.candidate_sinr_db(ue), ue.rb_mean_last_epoch,
                     loads};
}

EpochReport Coordinator::run_epoch_protocol(Policy& policy) {
  const int epoch = world_.epoch();
  const int num_ue = world_.cfg().num_ue;

  // (1) broadcast
  const LoadMessage msg = broadcast_loads();
  if (log_) {
    *log_ << epoch << ",load";
    for (int l : msg.loads) *log_ << ',' << l;
    *log_ << '\n';
  }

  // (2) every UE observes and submits a target — no-ops included
  std::vector<Observation> obs;
  obs.reserve(num_ue);
  std::vector<int> actions(num_ue);
  for (int u = 0; u < num_ue; ++u) {
    obs.push_back(make_observation(u, epoch, msg.loads));
    actions[u] = policy.choose(obs.back());
  }

  // (3) validate and execute in ascending UE order against the live table
  for (int u = 0; u < num_ue; ++u) {
    const HandoverRequest req{u, obs[u].serving_bs, actions[u], epoch};
    const Verdict verdict = validate_request(req);
    if (log_) {
      *log_ << epoch << ",req," << u << ',' << req.current_bs << ','
            << req.target_bs << '\n';
      *log_ << epoch << ",verdict," << u << ',' << verdict_name(verdict.code)
            << '\n';
    }
    if (verdict.accepted()) execute_handover(req);
  }
  log_attachment(epoch, "attach");

  // (4) the environment runs the epoch
  EpochReport report = world_.run_epoch();

  // The table must equal a from-scratch census after every epoch.
  require(table_.loads == report.bs_load,
          "load table diverged from the attachment census at epoch ", epoch);
  if (log_) {
    *log_ << epoch << ",census";
    for (int l : report.bs_load) *log_ << ',' << l;
    *log_ << '\n';
  }

  // (5) rewards and next states delivered per UE
  for (int u = 0; u < num_ue; ++u) {
    const Observation next = make_observation(u, epoch + 1, table_.loads);
    policy.observe(obs[u], actions[u], report.per_ue[u], next);
  }

  // (6) agents train
  policy.train_all();
  return report;
}

EpisodeResult run_episode(World& world, Policy& policy, bool eval,
                          std::ostream* event_log) {
  world.reset_episode();
  Coordinator coord(world, event_log);
  coord.log_initial_attachment();
  policy.begin_episode(eval);

  EpisodeResult result;
  double qos_sum = 0.0;
  long qos_count = 0;
  for (int e = 0; e < world.cfg().horizon_epochs; ++e) {
    EpochReport report = coord.run_epoch_protocol(policy);
    for (const auto& ue : report.per_ue) {
      qos_sum += ue.qos;
      ++qos_count;
      result.achieved_bits += ue.achieved_bits;
      result.delivered_bits += std::min(ue.achieved_bits, ue.demand_bits);
    }
    result.reports.push_back(std::move(report));
  }
  result.handovers = coord.handovers();
  result.mean_qos = qos_count > 0 ? qos_sum / qos_count : 0.0;
  return result;
}

}  // namespace lbsim
