#include "lbsim/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>
#include <utility>

#include "lbsim/coordinator.hpp"
#include "lbsim/trace.hpp"
#include "lbsim/util.hpp"
#include "lbsim/world.hpp"

namespace lbsim {

namespace fs = std::filesystem;

const char* policy_kind_name(PolicyKind kind) {
  return kind == PolicyKind::dqn ? "dqn" : "max_sinr";
}

PolicyKind policy_kind_from_name(const std::string& name) {
  if (name == "dqn") return PolicyKind::dqn;
  if (name == "max_sinr") return PolicyKind::max_sinr;
  fail("unknown policy name '", name, "' (expected dqn or max_sinr)");
}

std::string trace_path(const std::string& out_dir, int num_ue,
                       std::uint64_t seed) {
  return msg(out_dir, "/traces/trace_ue", num_ue, "_seed", seed, ".csv");
}

std::string event_log_path(const std::string& out_dir, const PlanCell& cell) {
  return msg(out_dir, "/logs/events_rb", cell.rb_per_bs, "_ue", cell.num_ue,
             "_seed", cell.seed, "_", policy_kind_name(cell.policy), ".log");
}

namespace {

int policy_rank(PolicyKind kind) { return kind == PolicyKind::dqn ? 0 : 1; }

// Canonical row order used everywhere a report or pairing is produced.
bool row_less(const ResultRow& a, const ResultRow& b) {
  return std::make_tuple(a.rb_per_bs, a.num_ue, a.seed, policy_rank(a.policy)) <
         std::make_tuple(b.rb_per_bs, b.num_ue, b.seed, policy_rank(b.policy));
}

std::string sanitize_error(std::string text) {
  for (char& c : text) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot open '", path, "' for writing");
  return out;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentPlan& plan) {
  require(!plan.cells.empty(), "experiment plan has no cells");
  require(!plan.out_dir.empty(), "experiment plan has no output directory");
  fs::create_directories(fs::path(plan.out_dir) / "traces");
  if (plan.write_event_logs) {
    fs::create_directories(fs::path(plan.out_dir) / "logs");
  }

  // One trace per (num_ue, seed); both policies must read identical bytes.
  std::map<std::pair<int, std::uint64_t>, std::uint64_t> trace_hashes;

  std::vector<ResultRow> rows;
  rows.reserve(plan.cells.size());
  for (const PlanCell& cell : plan.cells) {
    ResultRow row;
    row.rb_per_bs = cell.rb_per_bs;
    row.num_ue = cell.num_ue;
    row.seed = cell.seed;
    row.policy = cell.policy;
    try {
      SimConfig cfg = plan.base;
      cfg.rb_per_bs = cell.rb_per_bs;
      cfg.num_ue = cell.num_ue;
      cfg.rng_seed = cell.seed;
      cfg.validate();

      const auto key = std::make_pair(cell.num_ue, cell.seed);
      const std::string tpath = trace_path(plan.out_dir, cell.num_ue, cell.seed);
      auto it = trace_hashes.find(key);
      if (it == trace_hashes.end()) {
        const Trace generated = generate_trace(cfg, cell.seed);
        save_trace(generated, tpath);
        it = trace_hashes.emplace(key, fnv1a64_file(tpath)).first;
      }
      row.trace_hash = it->second;

      const Trace trace = load_trace(tpath);
      World world(cfg, trace);

      std::unique_ptr<Policy> policy;
      int episodes = 1;
      if (cell.policy == PolicyKind::dqn) {
        policy = std::make_unique<DqnPolicy>(cfg, cell.seed);
        episodes = cfg.hp.episodes;
      } else {
        policy = std::make_unique<BaselinePolicy>(cfg.hysteresis_db);
      }

      EpisodeResult final_result;
      for (int ep = 0; ep < episodes; ++ep) {
        const bool final_episode = (ep + 1 == episodes);
        const bool eval = final_episode && (cell.policy != PolicyKind::dqn ||
                                            cfg.eval_greedy);
        std::ofstream log_file;
        std::ostream* log = nullptr;
        if (final_episode && plan.write_event_logs) {
          log_file = open_out(event_log_path(plan.out_dir, cell));
          log = &log_file;
        }
        EpisodeResult result = run_episode(world, *policy, eval, log);
        if (final_episode) final_result = std::move(result);
      }

      row.episode = episodes - 1;
      row.total_throughput_bits = final_result.delivered_bits;
      row.mean_qos = final_result.mean_qos;
      row.handovers = final_result.handovers;
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DeltaRow> handover_delta(const std::vector<ResultRow>& rows) {
  struct CellPair {
    const ResultRow* dqn = nullptr;
    const ResultRow* max_sinr = nullptr;
  };
  std::map<std::tuple<int, int, std::uint64_t>, CellPair> cells;
  for (const ResultRow& row : rows) {
    CellPair& pair = cells[std::make_tuple(row.rb_per_bs, row.num_ue, row.seed)];
    const ResultRow*& slot =
        row.policy == PolicyKind::dqn ? pair.dqn : pair.max_sinr;
    require(slot == nullptr, "duplicate result row for rb=", row.rb_per_bs,
            " ue=", row.num_ue, " seed=", row.seed, " policy=",
            policy_kind_name(row.policy));
    slot = &row;
  }

  std::vector<DeltaRow> deltas;
  for (const auto& [key, pair] : cells) {
    const bool dqn_ok = pair.dqn != nullptr && !pair.dqn->failed;
    const bool base_ok = pair.max_sinr != nullptr && !pair.max_sinr->failed;
    if (!dqn_ok && !base_ok) continue;  // nothing comparable survived
    require(dqn_ok && base_ok, "missing counterpart cell for rb=",
            std::get<0>(key), " ue=", std::get<1>(key), " seed=",
            std::get<2>(key),
            " (handover deltas need both policies on the same cell)");
    DeltaRow d;
    d.rb_per_bs = std::get<0>(key);
    d.num_ue = std::get<1>(key);
    d.seed = std::get<2>(key);
    d.delta = pair.dqn->handovers - pair.max_sinr->handovers;
    deltas.push_back(d);
  }
  return deltas;
}

namespace {

constexpr const char* kResultsHeader =
    "rb_per_bs,num_ue,seed,policy,episode,total_throughput_bits,mean_qos,"
    "handovers,trace_hash,status,error";

void write_results_csv(const std::vector<ResultRow>& sorted,
                       const std::string& path) {
  std::ofstream out = open_out(path);
  out << kResultsHeader << '\n';
  for (const ResultRow& row : sorted) {
    out << row.rb_per_bs << ',' << row.num_ue << ',' << row.seed << ','
        << policy_kind_name(row.policy) << ',' << row.episode << ','
        << format_g17(row.total_throughput_bits) << ','
        << format_g17(row.mean_qos) << ',' << row.handovers << ','
        << row.trace_hash << ',' << (row.failed ? "failed" : "ok") << ','
        << sanitize_error(row.error) << '\n';
  }
  require(static_cast<bool>(out), "failed while writing '", path, "'");
}

// Mean throughput per policy at fixed (rb, ue), keyed by the varying axis.
struct SeriesCell {
  double dqn_sum = 0.0;
  int dqn_n = 0;
  double max_sinr_sum = 0.0;
  int max_sinr_n = 0;
};

void write_throughput_series(const std::map<int, SeriesCell>& series,
                             const char* axis_name, const std::string& path) {
  std::ofstream out = open_out(path);
  out << axis_name << ",dqn_throughput_bits,max_sinr_throughput_bits\n";
  for (const auto& [axis, cell] : series) {
    out << axis << ',';
    if (cell.dqn_n > 0) out << format_g17(cell.dqn_sum / cell.dqn_n);
    out << ',';
    if (cell.max_sinr_n > 0)
      out << format_g17(cell.max_sinr_sum / cell.max_sinr_n);
    out << '\n';
  }
  require(static_cast<bool>(out), "failed while writing '", path, "'");
}

void write_delta_series(const std::map<int, std::pair<long, int>>& series,
                        const char* axis_name, const std::string& path) {
  std::ofstream out = open_out(path);
  out << axis_name << ",handover_delta\n";
  for (const auto& [axis, acc] : series) {
    out << axis << ','
        << format_g17(static_cast<double>(acc.first) / acc.second) << '\n';
  }
  require(static_cast<bool>(out), "failed while writing '", path, "'");
}

}  // namespace

void emit_report(const std::vector<ResultRow>& rows,
                 const std::string& out_dir) {
  require(!rows.empty(), "refusing to write a report with no result rows");
  require(!out_dir.empty(), "report output directory is empty");

  std::vector<ResultRow> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), row_less);

  std::vector<const ResultRow*> ok;
  bool saw_dqn = false;
  bool saw_max_sinr = false;
  for (const ResultRow& row : sorted) {
    if (row.failed) continue;
    ok.push_back(&row);
    (row.policy == PolicyKind::dqn ? saw_dqn : saw_max_sinr) = true;
  }

  fs::create_directories(out_dir);
  write_results_csv(sorted, msg(out_dir, "/results.csv"));

  // Series axes: throughput vs rb at the largest population, and vs the
  // population at the smallest rb budget.
  int ue_star = 0;
  int rb_star = 0;
  if (!ok.empty()) {
    ue_star = (*std::max_element(ok.begin(), ok.end(),
                                 [](const ResultRow* a, const ResultRow* b) {
                                   return a->num_ue < b->num_ue;
                                 }))
                  ->num_ue;
    rb_star = (*std::min_element(ok.begin(), ok.end(),
                                 [](const ResultRow* a, const ResultRow* b) {
                                   return a->rb_per_bs < b->rb_per_bs;
                                 }))
                  ->rb_per_bs;
  }

  std::map<int, SeriesCell> vs_rb;
  std::map<int, SeriesCell> vs_ue;
  for (const ResultRow* row : ok) {
    if (row->num_ue == ue_star) {
      SeriesCell& cell = vs_rb[row->rb_per_bs];
      if (row->policy == PolicyKind::dqn) {
        cell.dqn_sum += row->total_throughput_bits;
        ++cell.dqn_n;
      } else {
        cell.max_sinr_sum += row->total_throughput_bits;
        ++cell.max_sinr_n;
      }
    }
    if (row->rb_per_bs == rb_star) {
      SeriesCell& cell = vs_ue[row->num_ue];
      if (row->policy == PolicyKind::dqn) {
        cell.dqn_sum += row->total_throughput_bits;
        ++cell.dqn_n;
      } else {
        cell.max_sinr_sum += row->total_throughput_bits;
        ++cell.max_sinr_n;
      }
    }
  }
  write_throughput_series(vs_rb, "rb_per_bs", msg(out_dir, "/throughput_vs_rb.csv"));
  write_throughput_series(vs_ue, "num_ue", msg(out_dir, "/throughput_vs_ue.csv"));

  // Handover deltas need both policies; with a single-policy result set the
  // series files still appear, just with no data rows.
  std::map<int, std::pair<long, int>> delta_vs_rb;
  std::map<int, std::pair<long, int>> delta_vs_ue;
  if (saw_dqn && saw_max_sinr) {
    for (const DeltaRow& d : handover_delta(rows)) {
      if (d.num_ue == ue_star) {
        delta_vs_rb[d.rb_per_bs].first += d.delta;
        delta_vs_rb[d.rb_per_bs].second += 1;
      }
      if (d.rb_per_bs == rb_star) {
        delta_vs_ue[d.num_ue].first += d.delta;
        delta_vs_ue[d.num_ue].second += 1;
      }
    }
  }
  write_delta_series(delta_vs_rb, "rb_per_bs",
                     msg(out_dir, "/handover_delta_vs_rb.csv"));
  write_delta_series(delta_vs_ue, "num_ue",
                     msg(out_dir, "/handover_delta_vs_ue.csv"));
}

std::vector<ResultRow> load_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open results file '", path, "'");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "results file '", path,
          "' is empty");
  require(line == kResultsHeader, "results file '", path,
          "' has an unexpected header: ", line);

  const auto to_long = [&](const std::string& s, const char* what) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    require(end != s.c_str() && *end == '\0', "bad ", what, " field '", s,
            "' in '", path, "'");
    return v;
  };
  const auto to_u64 = [&](const std::string& s, const char* what) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    require(end != s.c_str() && *end == '\0', "bad ", what, " field '", s,
            "' in '", path, "'");
    return static_cast<std::uint64_t>(v);
  };
  const auto to_double = [&](const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    require(end != s.c_str() && *end == '\0', "bad ", what, " field '", s,
            "' in '", path, "'");
    return v;
  };

  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    require(f.size() == 11, "results file '", path, "' line ", lineno,
            ": expected 11 fields, found ", f.size());
    ResultRow row;
    row.rb_per_bs = static_cast<int>(to_long(f[0], "rb_per_bs"));
    row.num_ue = static_cast<int>(to_long(f[1], "num_ue"));
    row.seed = to_u64(f[2], "seed");
    row.policy = policy_kind_from_name(f[3]);
    row.episode = static_cast<int>(to_long(f[4], "episode"));
    row.total_throughput_bits = to_double(f[5], "total_throughput_bits");
    row.mean_qos = to_double(f[6], "mean_qos");
    row.handovers = to_long(f[7], "handovers");
    row.trace_hash = to_u64(f[8], "trace_hash");
    if (f[9] == "ok") {
      row.failed = false;
    } else if (f[9] == "failed") {
      row.failed = true;
    } else {
      fail("results file '", path, "' line ", lineno, ": bad status '", f[9],
           "'");
    }
    row.error = f[10];
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "results file '", path, "' has no data rows");
  return rows;
}

long recount_handovers_from_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open event log '", path, "'");
  std::vector<std::vector<int>> snapshots;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv(line);
    if (f.size() < 2 || f[1] != "attach") continue;
    std::vector<int> serving;
    serving.reserve(f.size() - 2);
    for (std::size_t i = 2; i < f.size(); ++i) {
      char* end = nullptr;
      const long v = std::strtol(f[i].c_str(), &end, 10);
      require(end != f[i].c_str() && *end == '\0', "event log '", path,
              "' line ", lineno, ": bad attachment entry '", f[i], "'");
      serving.push_back(static_cast<int>(v));
    }
    if (!snapshots.empty()) {
      require(snapshots.back().size() == serving.size(), "event log '", path,
              "' line ", lineno, ": attachment rows disagree on UE count");
    }
    snapshots.push_back(std::move(serving));
  }
  require(!snapshots.empty(), "event log '", path,
          "' contains no attachment records");
  long count = 0;
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    for (std::size_t u = 0; u < snapshots[i].size(); ++u) {
      if (snapshots[i][u] != snapshots[i - 1][u]) ++count;
    }
  }
  return count;
}

}  // namespace lbsim
