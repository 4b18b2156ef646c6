#include "lbsim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "lbsim/channel.hpp"
#include "lbsim/util.hpp"

namespace lbsim {

int SimConfig::ttis_per_epoch() const {
  const double exact = epoch_minutes * 60000.0 / tti_ms;
  const long long rounded = std::llround(exact);
  require(std::fabs(exact - static_cast<double>(rounded)) < 1e-9 &&
              rounded > 0,
          "epoch_minutes/tti_ms give a non-integral TTI count: ", exact);
  return static_cast<int>(rounded);
}

namespace {

void validate_rect(const Rect& r, const char* name, double ax, double ay) {
  require(r.x0 < r.x1 && r.y0 < r.y1, name, " is degenerate");
  require(r.x0 >= 0.0 && r.y0 >= 0.0 && r.x1 <= ax && r.y1 <= ay, name,
          " extends outside the area");
}

bool contains_int(const std::vector<int>& xs, int v) {
  for (int x : xs)
    if (x == v) return true;
  return false;
}

}  // namespace

void SimConfig::validate() const {
  require(area_x_m > 0.0 && area_y_m > 0.0, "area must be positive");
  require(num_bs > 0, "num_bs must be positive");
  require(static_cast<int>(bs_positions.size()) == num_bs, "expected ", num_bs,
          " bs_positions, got ", bs_positions.size());
  for (const auto& [x, y] : bs_positions)
    require(x >= 0.0 && x <= area_x_m && y >= 0.0 && y <= area_y_m,
            "BS position (", x, ",", y, ") outside the area");
  require(!rb_allowed.empty() && !ue_allowed.empty(),
          "allowed-value sets must be non-empty");
  require(contains_int(rb_allowed, rb_per_bs), "rb_per_bs ", rb_per_bs,
          " not in the allowed set");
  require(contains_int(ue_allowed, num_ue), "num_ue ", num_ue,
          " not in the allowed set");
  require(noise_dbm < tx_power_dbm, "noise at or above transmit power");
  require(fc_ghz > 0.0, "fc_ghz must be positive");
  require(h_bs_m > h_ut_m && h_ut_m > 0.0, "need h_bs > h_ut > 0");
  require(tx_power_dbm > 0.0, "tx_power_dbm must be positive");
  require(rb_bw_hz > 0.0, "rb_bw_hz must be positive");
  require(tti_ms > 0.0 && epoch_minutes > 0.0, "time steps must be positive");
  require(ues_per_tti > 0, "ues_per_tti must be positive");
  require(horizon_epochs > 0, "horizon_epochs must be positive");
  ttis_per_epoch();  // integrality check

  // The path-loss max() must never switch branch inside the model's range;
  // this holds at the configured UE height or the config is rejected.
  require(channel::nlos_dominates(h_ut_m),
          "NLOS path-loss curve does not dominate at h_ut=", h_ut_m,
          "; this height is outside the supported regime");

  validate_rect(residential_rect, "residential_rect", area_x_m, area_y_m);
  validate_rect(office_rect, "office_rect", area_x_m, area_y_m);
  require(0 <= morning_start_epoch && morning_start_epoch < morning_end_epoch &&
              morning_end_epoch <= evening_start_epoch &&
              evening_start_epoch < evening_end_epoch &&
              evening_end_epoch <= horizon_epochs,
          "commute windows must be ordered within the horizon");

  require(demand_min_bits > 0.0 && demand_min_bits <= demand_max_bits,
          "demand range must satisfy 0 < min <= max");
  require(reward_scale_bps > 0.0, "reward_scale_bps must be positive");
  require(hysteresis_db >= 0.0, "hysteresis_db must be >= 0");
  require(max_attached_per_bs >= 0, "max_attached_per_bs must be >= 0");
  require(max_attached_per_bs == 0 ||
              static_cast<long>(max_attached_per_bs) * num_bs >= num_ue,
          "max_attached_per_bs too small to hold every UE");

  require(hp.learning_rate > 0.0, "learning_rate must be positive");
  require(hp.gamma >= 0.0 && hp.gamma < 1.0, "gamma must be in [0,1)");
  require(hp.epsilon >= 0.0 && hp.epsilon <= 1.0, "epsilon must be in [0,1]");
  require(hp.memory_capacity > 0, "memory_capacity must be positive");
  require(hp.batch_size > 0 && hp.batch_size <= hp.memory_capacity,
          "batch_size must be in (0, memory_capacity]");
  require(hp.episodes > 0, "episodes must be positive");
  require(hp.target_sync_interval > 0, "target_sync_interval must be positive");
  require(hp.hidden1 > 0 && hp.hidden2 > 0 && hp.hidden3 > 0,
          "hidden layer widths must be positive");
}

void apply_desk_scale(SimConfig& cfg) {
  cfg.horizon_epochs = 120;
  cfg.morning_start_epoch = 35;   // 420 / 12
  cfg.morning_end_epoch = 45;
  cfg.evening_start_epoch = 85;
  cfg.evening_end_epoch = 95;
  cfg.hp.episodes = 20;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& where) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  require(end == v.c_str() + v.size() && !v.empty(), where,
          ": expected a number, got '", v, "'");
  return x;
}

int parse_int(const std::string& v, const std::string& where) {
  const double x = parse_double(v, where);
  const int i = static_cast<int>(x);
  require(static_cast<double>(i) == x, where, ": expected an integer, got '", v,
          "'");
  return i;
}

std::uint64_t parse_u64(const std::string& v, const std::string& where) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  require(end == v.c_str() + v.size() && !v.empty(), where,
          ": expected an unsigned integer, got '", v, "'");
  return x;
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(where, ": expected true/false, got '", v, "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

std::vector<int> parse_int_list(const std::string& v, const std::string& where) {
  std::vector<int> out;
  for (const auto& piece : split(v, ','))
    out.push_back(parse_int(piece, where));
  return out;
}

Rect parse_rect(const std::string& v, const std::string& where) {
  const auto p = split(v, ',');
  require(p.size() == 4, where, ": rect needs x0,y0,x1,y1");
  return Rect{parse_double(p[0], where), parse_double(p[1], where),
              parse_double(p[2], where), parse_double(p[3], where)};
}

std::vector<std::pair<double, double>> parse_points(const std::string& v,
                                                    const std::string& where) {
  std::vector<std::pair<double, double>> out;
  for (const auto& piece : split(v, ';')) {
    const auto xy = split(piece, ',');
    require(xy.size() == 2, where, ": point needs x,y — got '", piece, "'");
    out.emplace_back(parse_double(xy[0], where), parse_double(xy[1], where));
  }
  return out;
}

}  // namespace

SimConfig parse_config(std::istream& in, const std::string& origin,
                       const SimConfig& base) {
  SimConfig cfg = base;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"area_x_m", [&](auto& v, auto& w) { cfg.area_x_m = parse_double(v, w); }},
      {"area_y_m", [&](auto& v, auto& w) { cfg.area_y_m = parse_double(v, w); }},
      {"num_bs", [&](auto& v, auto& w) { cfg.num_bs = parse_int(v, w); }},
      {"bs_positions",
       [&](auto& v, auto& w) { cfg.bs_positions = parse_points(v, w); }},
      {"rb_per_bs", [&](auto& v, auto& w) { cfg.rb_per_bs = parse_int(v, w); }},
      {"rb_allowed",
       [&](auto& v, auto& w) { cfg.rb_allowed = parse_int_list(v, w); }},
      {"num_ue", [&](auto& v, auto& w) { cfg.num_ue = parse_int(v, w); }},
      {"ue_allowed",
       [&](auto& v, auto& w) { cfg.ue_allowed = parse_int_list(v, w); }},
      {"noise_dbm", [&](auto& v, auto& w) { cfg.noise_dbm = parse_double(v, w); }},
      {"fc_ghz", [&](auto& v, auto& w) { cfg.fc_ghz = parse_double(v, w); }},
      {"h_bs_m", [&](auto& v, auto& w) { cfg.h_bs_m = parse_double(v, w); }},
      {"h_ut_m", [&](auto& v, auto& w) { cfg.h_ut_m = parse_double(v, w); }},
      {"tx_power_dbm",
       [&](auto& v, auto& w) { cfg.tx_power_dbm = parse_double(v, w); }},
      {"rb_bw_hz", [&](auto& v, auto& w) { cfg.rb_bw_hz = parse_double(v, w); }},
      {"interference_enabled",
       [&](auto& v, auto& w) { cfg.interference_enabled = parse_bool(v, w); }},
      {"tti_ms", [&](auto& v, auto& w) { cfg.tti_ms = parse_double(v, w); }},
      {"ues_per_tti",
       [&](auto& v, auto& w) { cfg.ues_per_tti = parse_int(v, w); }},
      {"epoch_minutes",
       [&](auto& v, auto& w) { cfg.epoch_minutes = parse_double(v, w); }},
      {"horizon_epochs",
       [&](auto& v, auto& w) { cfg.horizon_epochs = parse_int(v, w); }},
      {"residential_rect",
       [&](auto& v, auto& w) { cfg.residential_rect = parse_rect(v, w); }},
      {"office_rect",
       [&](auto& v, auto& w) { cfg.office_rect = parse_rect(v, w); }},
      {"morning_start_epoch",
       [&](auto& v, auto& w) { cfg.morning_start_epoch = parse_int(v, w); }},
      {"morning_end_epoch",
       [&](auto& v, auto& w) { cfg.morning_end_epoch = parse_int(v, w); }},
      {"evening_start_epoch",
       [&](auto& v, auto& w) { cfg.evening_start_epoch = parse_int(v, w); }},
      {"evening_end_epoch",
       [&](auto& v, auto& w) { cfg.evening_end_epoch = parse_int(v, w); }},
      {"demand_min_bits",
       [&](auto& v, auto& w) { cfg.demand_min_bits = parse_double(v, w); }},
      {"demand_max_bits",
       [&](auto& v, auto& w) { cfg.demand_max_bits = parse_double(v, w); }},
      {"reward_scale_bps",
       [&](auto& v, auto& w) { cfg.reward_scale_bps = parse_double(v, w); }},
      {"reward_demand_capped",
       [&](auto& v, auto& w) { cfg.reward_demand_capped = parse_bool(v, w); }},
      {"eval_greedy",
       [&](auto& v, auto& w) { cfg.eval_greedy = parse_bool(v, w); }},
      {"hysteresis_db",
       [&](auto& v, auto& w) { cfg.hysteresis_db = parse_double(v, w); }},
      {"max_attached_per_bs",
       [&](auto& v, auto& w) { cfg.max_attached_per_bs = parse_int(v, w); }},
      {"rng_seed", [&](auto& v, auto& w) { cfg.rng_seed = parse_u64(v, w); }},
      {"learning_rate",
       [&](auto& v, auto& w) { cfg.hp.learning_rate = parse_double(v, w); }},
      {"gamma", [&](auto& v, auto& w) { cfg.hp.gamma = parse_double(v, w); }},
      {"memory_capacity",
       [&](auto& v, auto& w) { cfg.hp.memory_capacity = parse_int(v, w); }},
      {"batch_size",
       [&](auto& v, auto& w) { cfg.hp.batch_size = parse_int(v, w); }},
      {"epsilon", [&](auto& v, auto& w) { cfg.hp.epsilon = parse_double(v, w); }},
      {"episodes", [&](auto& v, auto& w) { cfg.hp.episodes = parse_int(v, w); }},
      {"target_sync_interval",
       [&](auto& v, auto& w) { cfg.hp.target_sync_interval = parse_int(v, w); }},
      {"hidden1", [&](auto& v, auto& w) { cfg.hp.hidden1 = parse_int(v, w); }},
      {"hidden2", [&](auto& v, auto& w) { cfg.hp.hidden2 = parse_int(v, w); }},
      {"hidden3", [&](auto& v, auto& w) { cfg.hp.hidden3 = parse_int(v, w); }},
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    const std::string where = msg(origin, ":", lineno);
    require(eq != std::string::npos, where, ": expected 'key = value', got '",
            stripped, "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    const auto it = setters.find(key);
    require(it != setters.end(), where, ": unknown key '", key, "'");
    it->second(value, where);
  }
  cfg.validate();
  return cfg;
}

SimConfig load_config(const std::string& path, const SimConfig& base) {
  std::ifstream in(path);
  require(in.good(), "cannot open config file '", path, "'");
  return parse_config(in, path, base);
}

}  // namespace lbsim
