#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

// Simulation configuration: the environment geometry, radio constants,
// scheduler settings, mobility zones, traffic model, and the per-UE learner
// hyperparameters. Loadable from a flat `key = value` file; unknown keys are
// rejected so typos cannot silently fall back to defaults.

namespace lbsim {

struct Rect {
  double x0, y0, x1, y1;  // x0 < x1, y0 < y1
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

// Q-learner hyperparameters; the defaults are the tuned production values.
struct Hyperparams {
  double learning_rate = 0.01;
  double gamma = 0.9;             // discount factor
  int memory_capacity = 480;      // replay buffer size, FIFO
  int batch_size = 150;
  double epsilon = 0.8;           // probability of EXPLOITING (argmax); the
                                  // remaining 1-epsilon explores uniformly
  int episodes = 100;
  int target_sync_interval = 20;  // train steps between target-net copies
  int hidden1 = 64;
  int hidden2 = 64;
  int hidden3 = 32;
};

struct SimConfig {
  // Area and sites
  double area_x_m = 2000.0;
  double area_y_m = 1500.0;
  int num_bs = 4;
  std::vector<std::pair<double, double>> bs_positions = {
      {500.0, 375.0}, {1500.0, 375.0}, {500.0, 1125.0}, {1500.0, 1125.0}};

  // Radio
  int rb_per_bs = 50;
  std::vector<int> rb_allowed = {50, 100};
  int num_ue = 20;
  std::vector<int> ue_allowed = {20, 40, 50, 60, 80, 100};
  double noise_dbm = -95.0;
  double fc_ghz = 3.5;
  double h_bs_m = 25.0;
  double h_ut_m = 1.5;
  double tx_power_dbm = 46.0;
  double rb_bw_hz = 360000.0;
  bool interference_enabled = false;

  // Time and scheduling
  double tti_ms = 1.0;
  int ues_per_tti = 10;
  double epoch_minutes = 1.0;
  int horizon_epochs = 1440;

  // Mobility: two districts, each hugging one macro site; residents commute
  // to the office district in the morning window and back in the evening.
  Rect residential_rect{200.0, 900.0, 800.0, 1350.0};
  Rect office_rect{1200.0, 150.0, 1800.0, 600.0};
  int morning_start_epoch = 420;
  int morning_end_epoch = 540;
  int evening_start_epoch = 1020;
  int evening_end_epoch = 1140;

  // Traffic: per-epoch demand drawn log-uniformly from [min, max] bits.
  double demand_min_bits = 1e7;
  double demand_max_bits = 2e9;

  // Learning environment
  double reward_scale_bps = 1e7;    // reward = rate / scale, keeps SGD sane
  bool reward_demand_capped = false;
  bool eval_greedy = true;          // final episode: pure argmax, no training
  double hysteresis_db = 0.0;       // baseline switching margin
  int max_attached_per_bs = 0;      // 0 = unlimited

  std::uint64_t rng_seed = 1;

  Hyperparams hp;

  int ttis_per_epoch() const;
  double epoch_seconds() const { return epoch_minutes * 60.0; }
  double tti_seconds() const { return tti_ms / 1000.0; }

  // Throws with a specific message on any inconsistent field combination.
  void validate() const;
};

// Shrinks a full-scale config to the fast sweep shape: 120-epoch horizon
// with commute windows scaled to match, 20 episodes.
void apply_desk_scale(SimConfig& cfg);

// Parses `key = value` lines over a starting config (`base`), so callers can
// pre-apply a preset and still let the file override individual keys.
SimConfig parse_config(std::istream& in, const std::string& origin,
                       const SimConfig& base = SimConfig{});
SimConfig load_config(const std::string& path,
                      const SimConfig& base = SimConfig{});

}  // namespace lbsim
