#include "lbsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lbsim/rng.hpp"
#include "lbsim/util.hpp"

namespace lbsim {

Trace::Trace(std::vector<TraceRow> rows, int num_ue, int horizon)
    : rows_(std::move(rows)), num_ue_(num_ue), horizon_(horizon) {
  require(num_ue_ > 0 && horizon_ > 0, "trace needs positive UE count and horizon");
  std::sort(rows_.begin(), rows_.end(), [](const TraceRow& a, const TraceRow& b) {
    return a.epoch != b.epoch ? a.epoch < b.epoch : a.ue_id < b.ue_id;
  });
  // Walk the expected (epoch, ue) grid against the sorted rows so any hole or
  // duplicate is reported by name.
  long i = 0;
  const long total = static_cast<long>(rows_.size());
  for (int e = 0; e < horizon_; ++e)
    for (int u = 0; u < num_ue_; ++u) {
      require(i < total && rows_[i].epoch == e && rows_[i].ue_id == u,
              "trace is missing the row for ue ", u, " at epoch ", e);
      const TraceRow& r = rows_[i];
      require(std::isfinite(r.x_m) && std::isfinite(r.y_m) &&
                  std::isfinite(r.demand_bits) && r.demand_bits >= 0.0,
              "trace row for ue ", u, " epoch ", e, " has bad values");
      ++i;
      require(i == total || rows_[i].epoch != e || rows_[i].ue_id != u,
              "trace has a duplicate row for ue ", u, " at epoch ", e);
    }
  require(i == total, "trace has ", total - i, " extra rows past epoch ",
          horizon_ - 1);
}

const TraceRow& Trace::at(int epoch, int ue_id) const {
  require(epoch >= 0 && epoch < horizon_, "trace epoch ", epoch,
          " outside 0..", horizon_ - 1);
  require(ue_id >= 0 && ue_id < num_ue_, "trace ue ", ue_id, " outside 0..",
          num_ue_ - 1);
  return rows_[static_cast<long>(epoch) * num_ue_ + ue_id];
}

namespace {

struct Point {
  double x, y;
};

Point lerp(const Point& a, const Point& b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

Point uniform_in(Rng& rng, const Rect& r) {
  // Draw order pinned: x then y.
  const double x = rng.uniform(r.x0, r.x1);
  const double y = rng.uniform(r.y0, r.y1);
  return {x, y};
}

}  // namespace

Trace generate_trace(const SimConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int h = cfg.horizon_epochs;
  std::vector<TraceRow> rows;
  rows.reserve(static_cast<long>(cfg.num_ue) * h);

  for (int u = 0; u < cfg.num_ue; ++u) {
    Rng rng(derive_seed(seed, kStreamTrace, static_cast<std::uint64_t>(u)));
    const bool resident = home_zone(u) == Zone::residential;
    const Point home =
        uniform_in(rng, resident ? cfg.residential_rect : cfg.office_rect);
    const Point dest = resident ? uniform_in(rng, cfg.office_rect) : home;

    for (int e = 0; e < h; ++e) {
      Point pos = home;
      if (resident) {
        if (e >= cfg.morning_start_epoch && e < cfg.morning_end_epoch) {
          // Arrives exactly on the window's last epoch; constant speed.
          const double t = static_cast<double>(e - cfg.morning_start_epoch + 1) /
                           (cfg.morning_end_epoch - cfg.morning_start_epoch);
          pos = lerp(home, dest, t);
        } else if (e >= cfg.morning_end_epoch && e < cfg.evening_start_epoch) {
          pos = dest;
        } else if (e >= cfg.evening_start_epoch && e < cfg.evening_end_epoch) {
          const double t = static_cast<double>(e - cfg.evening_start_epoch + 1) /
                           (cfg.evening_end_epoch - cfg.evening_start_epoch);
          pos = lerp(dest, home, t);
        }
      }
      const double demand = std::exp(rng.uniform(std::log(cfg.demand_min_bits),
                                                 std::log(cfg.demand_max_bits)));
      rows.push_back(TraceRow{u, e, pos.x, pos.y, demand});
    }
  }
  return Trace(std::move(rows), cfg.num_ue, h);
}

namespace {
constexpr const char* kHeader = "ue_id,epoch,x_m,y_m,demand_bits";
}

void save_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  require(out.good(), "cannot open '", path, "' for writing");
  out << kHeader << "\n";
  // UE-major order: all of a UE's day in one block.
  for (int u = 0; u < trace.num_ue(); ++u)
    for (int e = 0; e < trace.horizon(); ++e) {
      const TraceRow& r = trace.at(e, u);
      out << r.ue_id << "," << r.epoch << "," << format_g17(r.x_m) << ","
          << format_g17(r.y_m) << "," << format_g17(r.demand_bits) << "\n";
    }
  out.flush();
  require(out.good(), "write to '", path, "' failed");
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open trace file '", path, "'");
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), path, ": no rows");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kHeader, path, ":1: expected header '", kHeader, "', got '",
          line, "'");

  std::vector<TraceRow> rows;
  int max_ue = -1, max_epoch = -1;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    TraceRow r{};
    std::istringstream ls(line);
    std::string field;
    double vals[5];
    for (int f = 0; f < 5; ++f) {
      require(static_cast<bool>(std::getline(ls, field, ',')), path, ":",
              lineno, ": expected 5 fields");
      char* end = nullptr;
      vals[f] = std::strtod(field.c_str(), &end);
      require(!field.empty() && end == field.c_str() + field.size(), path, ":",
              lineno, ": bad number '", field, "'");
    }
    require(!std::getline(ls, field, ','), path, ":", lineno,
            ": expected 5 fields, found more");
    r.ue_id = static_cast<int>(vals[0]);
    r.epoch = static_cast<int>(vals[1]);
    require(static_cast<double>(r.ue_id) == vals[0] &&
                static_cast<double>(r.epoch) == vals[1] && r.ue_id >= 0 &&
                r.epoch >= 0,
            path, ":", lineno, ": ue_id/epoch must be non-negative integers");
    r.x_m = vals[2];
    r.y_m = vals[3];
    r.demand_bits = vals[4];
    max_ue = std::max(max_ue, r.ue_id);
    max_epoch = std::max(max_epoch, r.epoch);
    rows.push_back(r);
  }
  require(!rows.empty(), path, ": no rows");
  // The Trace constructor proves contiguity: with N*(H!=...) counts or any
  // missing (ue, epoch) pair, it reports the exact gap.
  return Trace(std::move(rows), max_ue + 1, max_epoch + 1);
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open '", path, "' for hashing");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  return h;
}

}  // namespace lbsim
