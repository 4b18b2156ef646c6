#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lbsim/config.hpp"

// Mobility/demand traces: one row per (UE, epoch) holding the UE's position
// and the bits it wants delivered that epoch. Traces are generated once per
// (config, seed) and always consumed from the saved file, so competing
// policies provably read identical bytes.

namespace lbsim {

enum class Zone { residential, office };

// Home-district rule: even ids live in the residential district, odd ids in
// the office district. Only residents commute; office-homed UEs are static.
inline Zone home_zone(int ue_id) {
  return ue_id % 2 == 0 ? Zone::residential : Zone::office;
}

struct TraceRow {
  int ue_id;
  int epoch;
  double x_m;
  double y_m;
  double demand_bits;
};

// Rows sorted by (epoch, ue_id); exactly num_ue rows per epoch.
class Trace {
 public:
  Trace(std::vector<TraceRow> rows, int num_ue, int horizon);

  int num_ue() const { return num_ue_; }
  int horizon() const { return horizon_; }
  const TraceRow& at(int epoch, int ue_id) const;
  const std::vector<TraceRow>& rows() const { return rows_; }

 private:
  std::vector<TraceRow> rows_;
  int num_ue_;
  int horizon_;
};

// One row per (UE, epoch) over cfg.horizon_epochs epochs. Residents start
// uniformly in the residential district, walk a straight line at constant
// speed to a uniformly drawn office destination across the morning window,
// and walk back across the evening window; office-homed UEs hold a uniform
// office position all day. Demand is drawn log-uniformly per epoch. Each UE
// consumes its own derived RNG stream, so traces are reproducible and
// insensitive to UE-count changes elsewhere.
Trace generate_trace(const SimConfig& cfg, std::uint64_t seed);

void save_trace(const Trace& trace, const std::string& path);

// Parses and validates: header, field count per line, contiguous epochs
// 0...H-1 for every UE, the same H for all UEs, contiguous UE ids 0...N-1.
// Errors name the offending line or the first missing (ue, epoch).
Trace load_trace(const std::string& path);

// FNV-1a over the raw file bytes; recorded alongside results so paired runs
// can prove they consumed the same trace.
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace lbsim
