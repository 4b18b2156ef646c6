#include "lbsim/world.hpp"

#include <algorithm>
#include <cmath>

#include "lbsim/channel.hpp"
#include "lbsim/sched.hpp"
#include "lbsim/util.hpp"

namespace lbsim {

double achieved_rate(double n_rb, double sinr_linear, double rb_bw_hz) {
  require(n_rb >= 0.0, "achieved_rate: negative RB count ", n_rb);
  require(std::isfinite(sinr_linear) && sinr_linear >= 0.0,
          "achieved_rate: SINR must be finite and non-negative, got ",
          sinr_linear);
  require(rb_bw_hz > 0.0, "achieved_rate: non-positive RB bandwidth");
  return n_rb * rb_bw_hz * std::log2(1.0 + sinr_linear);
}

World::World(const SimConfig& cfg, const Trace& trace)
    : cfg_(cfg), trace_(trace) {
  cfg_.validate();
  require(trace.num_ue() == cfg_.num_ue, "trace holds ", trace.num_ue(),
          " UEs but the config expects ", cfg_.num_ue);
  require(trace.horizon() == cfg_.horizon_epochs, "trace spans ",
          trace.horizon(), " epochs but the config expects ",
          cfg_.horizon_epochs);

  bss_.reserve(cfg_.num_bs);
  for (int b = 0; b < cfg_.num_bs; ++b)
    bss_.push_back(BaseStationState{b, cfg_.bs_positions[b].first,
                                    cfg_.bs_positions[b].second,
                                    cfg_.rb_per_bs,
                                    {},
                                    {}});
  ues_.resize(cfg_.num_ue);
  reset_episode();
}

void World::reset_episode() {
  for (auto& bs : bss_) {
    bs.attached.clear();
    bs.rr_queue.clear();
  }
  for (int u = 0; u < cfg_.num_ue; ++u) {
    const TraceRow& row = trace_.at(0, u);
    ues_[u] = UserEquipment{u,   row.x_m, row.y_m, home_zone(u),
                            -1,  row.demand_bits, 0.0};
  }
  epoch_ = 0;
  attach_initial();
}

void World::attach_initial() {
  for (auto& ue : ues_) {
    const auto rxp = rxp_dbm_at(ue.x_m, ue.y_m);
    int best = 0;
    for (int b = 1; b < cfg_.num_bs; ++b)
      if (rxp[b] > rxp[best]) best = b;
    ue.serving_bs = best;
    bss_[best].attached.insert(ue.id);
    bss_[best].rr_queue.push_back(ue.id);  // ascending id per queue
  }
  check_census();
}

std::vector<int> World::loads() const {
  std::vector<int> out(bss_.size());
  for (size_t b = 0; b < bss_.size(); ++b) out[b] = bss_[b].load();
  return out;
}

std::vector<double> World::rxp_dbm_at(double x_m, double y_m) const {
  std::vector<double> out(bss_.size());
  for (size_t b = 0; b < bss_.size(); ++b) {
    const double dx = x_m - bss_[b].x_m;
    const double dy = y_m - bss_[b].y_m;
    const channel::LinkGeometry geom{std::sqrt(dx * dx + dy * dy), cfg_.h_bs_m,
                                     cfg_.h_ut_m, cfg_.fc_ghz};
    out[b] = channel::rx_power_dbm(cfg_.tx_power_dbm,
                                   channel::path_loss_uma_nlos(geom));
  }
  return out;
}

std::vector<double> World::candidate_sinr_db(const UserEquipment& ue) const {
  const auto rxp = rxp_dbm_at(ue.x_m, ue.y_m);
  std::vector<double> out(rxp.size());
  for (int b = 0; b < static_cast<int>(rxp.size()); ++b)
    out[b] = 10.0 * std::log10(channel::sinr_linear(
                 rxp, b, cfg_.noise_dbm, cfg_.interference_enabled));
  return out;
}

void World::apply_handover(int ue_id, int target_bs) {
  require(ue_id >= 0 && ue_id < cfg_.num_ue, "unknown ue ", ue_id);
  require(target_bs >= 0 && target_bs < cfg_.num_bs, "unknown BS ", target_bs);
  UserEquipment& ue = ues_[ue_id];
  require(ue.serving_bs != target_bs, "handover to the serving BS is a no-op");

  BaseStationState& from = bss_[ue.serving_bs];
  from.attached.erase(ue_id);
  const auto slot =
      std::find(from.rr_queue.begin(), from.rr_queue.end(), ue_id);
  require(slot != from.rr_queue.end(), "ue ", ue_id,
          " missing from its queue");
  from.rr_queue.erase(slot);

  BaseStationState& to = bss_[target_bs];
  to.attached.insert(ue_id);
  to.rr_queue.push_back(ue_id);
  ue.serving_bs = target_bs;
}

EpochReport World::run_epoch() {
  require(epoch_ < trace_.horizon(), "world ran past the trace horizon");
  const long ttis = cfg_.ttis_per_epoch();

  for (auto& ue : ues_) {
    const TraceRow& row = trace_.at(epoch_, ue.id);
    ue.x_m = row.x_m;
    ue.y_m = row.y_m;
    ue.demand_bits = row.demand_bits;
  }

  EpochReport report;
  report.epoch = epoch_;
  report.per_ue.resize(cfg_.num_ue);

  for (auto& bs : bss_) {
    const auto rb_ttis = sched::schedule_epoch(bs.rr_queue, bs.rb_budget,
                                               cfg_.ues_per_tti, ttis);
    for (const auto& [ue_id, total] : rb_ttis)
      report.per_ue[ue_id].rb_ttis = total;
  }

  for (auto& ue : ues_) {
    UeEpochOutcome& out = report.per_ue[ue.id];
    const auto rxp = rxp_dbm_at(ue.x_m, ue.y_m);
    const double sinr = channel::sinr_linear(rxp, ue.serving_bs,
                                             cfg_.noise_dbm,
                                             cfg_.interference_enabled);
    out.serving_bs = ue.serving_bs;
    out.rb_mean_per_tti = static_cast<double>(out.rb_ttis) / ttis;
    out.sinr_db = 10.0 * std::log10(sinr);
    out.achieved_rate_bps = achieved_rate(out.rb_mean_per_tti, sinr,
                                          cfg_.rb_bw_hz);
    out.achieved_bits = out.achieved_rate_bps * cfg_.epoch_seconds();
    out.demand_bits = ue.demand_bits;
    out.qos = ue.demand_bits > 0.0
                  ? std::min(out.achieved_bits, ue.demand_bits) / ue.demand_bits
                  : 1.0;
    ue.rb_mean_last_epoch = out.rb_mean_per_tti;
  }

  report.bs_load = loads();
  check_census();
  ++epoch_;
  return report;
}

void World::check_census() const {
  long total = 0;
  for (const auto& bs : bss_) {
    require(bs.rr_queue.size() == bs.attached.size(),
            "BS ", bs.id, " queue and attachment set disagree");
    for (int ue_id : bs.rr_queue)
      require(bs.attached.count(ue_id) == 1, "BS ", bs.id,
              " queue holds unattached ue ", ue_id);
    total += bs.load();
  }
  require(total == cfg_.num_ue, "attachment census counts ", total,
          " UEs, expected ", cfg_.num_ue);
  for (const auto& ue : ues_) {
    require(ue.serving_bs >= 0 && ue.serving_bs < cfg_.num_bs,
            "ue ", ue.id, " has no serving BS");
    require(bss_[ue.serving_bs].attached.count(ue.id) == 1, "ue ", ue.id,
            " not attached where it claims");
  }
}

}  // namespace lbsim
