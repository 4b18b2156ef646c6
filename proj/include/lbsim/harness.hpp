#pragma once
// Experiment harness: runs grids of (rb_budget, num_ue, seed, policy) cells,
// collects per-cell results, and writes the report files.

#include <cstdint>
#include <string>
#include <vector>

#include "lbsim/config.hpp"

namespace lbsim {

enum class PolicyKind { dqn, max_sinr };

const char* policy_kind_name(PolicyKind kind);
PolicyKind policy_kind_from_name(const std::string& name);

// One experiment cell: a full training run (or single baseline pass) of one
// policy on one generated scenario.
struct PlanCell {
  int rb_per_bs = 0;
  int num_ue = 0;
  std::uint64_t seed = 0;
  PolicyKind policy = PolicyKind::dqn;
};

struct ExperimentPlan {
  SimConfig base;                // shared settings; rb/ue/seed overridden per cell
  std::vector<PlanCell> cells;   // executed in order
  std::string out_dir;           // traces/ and logs/ are created beneath this
  bool write_event_logs = true;  // final-episode event log per cell
};

// Result of one cell, reported for its final (measurement) episode.
struct ResultRow {
  int rb_per_bs = 0;
  int num_ue = 0;
  std::uint64_t seed = 0;
  PolicyKind policy = PolicyKind::dqn;
  int episode = 0;                      // index of the reported episode
  double total_throughput_bits = 0.0;   // delivered bits, capped at demand
  double mean_qos = 0.0;                // mean over epochs and users
  long handovers = 0;                   // executed handovers in the episode
  std::uint64_t trace_hash = 0;         // hash of the trace file consumed
  bool failed = false;
  std::string error;                    // set when failed
};

// Per-cell handover difference (dqn minus max_sinr), paired by (rb, ue, seed).
struct DeltaRow {
  int rb_per_bs = 0;
  int num_ue = 0;
  std::uint64_t seed = 0;
  long delta = 0;
};

// Paths used by the harness (also consumed by tests and the report tool).
std::string trace_path(const std::string& out_dir, int num_ue, std::uint64_t seed);
std::string event_log_path(const std::string& out_dir, const PlanCell& cell);

// Runs every cell in order.  The trace for each (num_ue, seed) pair is
// generated once, written to disk, and re-loaded from disk for every cell that
// uses it, so both policies consume byte-identical input.  A cell that throws
// is recorded as a failed row and the sweep continues.
std::vector<ResultRow> run_experiment(const ExperimentPlan& plan);

// Pairs dqn rows with max_sinr rows on (rb, ue, seed) and returns the
// handover difference per cell.  A non-failed row whose counterpart is
// missing or failed is an error; cells where both sides failed are skipped.
std::vector<DeltaRow> handover_delta(const std::vector<ResultRow>& rows);

// Writes results.csv plus the four series files into out_dir.  Refuses to
// write anything when rows is empty.
void emit_report(const std::vector<ResultRow>& rows, const std::string& out_dir);

// Reads a results.csv written by emit_report back into rows.
std::vector<ResultRow> load_results(const std::string& path);

// Independent handover count from an event log: walks the attachment
// snapshots and counts serving-cell changes between consecutive epochs.
long recount_handovers_from_log(const std::string& path);

}  // namespace lbsim
