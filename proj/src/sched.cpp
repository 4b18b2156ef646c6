#include "lbsim/sched.hpp"

#include <numeric>

#include "lbsim/util.hpp"

namespace lbsim::sched {

std::vector<std::pair<int, int>> allocate_round_robin(std::deque<int>& rr_queue,
                                                      int rb_budget,
                                                      int ues_per_tti) {
  require(rb_budget >= 0, "negative RB budget");
  require(ues_per_tti > 0, "ues_per_tti must be positive");
  std::vector<std::pair<int, int>> grants;
  const int served = std::min<int>(ues_per_tti, rr_queue.size());
  if (served == 0) return grants;

  const int share = rb_budget / served;
  const int remainder = rb_budget - share * served;
  grants.reserve(served);
  for (int s = 0; s < served; ++s) {
    const int ue = rr_queue.front();
    rr_queue.pop_front();
    grants.emplace_back(ue, share + (s < remainder ? 1 : 0));
    rr_queue.push_back(ue);
  }
  return grants;
}

std::map<int, long> schedule_epoch(std::deque<int>& rr_queue, int rb_budget,
                                   int ues_per_tti, long num_ttis) {
  require(num_ttis >= 0, "negative TTI count");
  std::map<int, long> totals;
  const int k = static_cast<int>(rr_queue.size());
  if (k == 0 || num_ttis == 0) return totals;
  for (int ue : rr_queue) totals[ue] = 0;

  const int served = std::min(ues_per_tti, k);
  // The queue returns to its starting order every `period` TTIs.
  const int period = k / std::gcd(served, k);
  const long full_periods = num_ttis / period;
  const long leftover = num_ttis % period;

  if (full_periods > 0) {
    std::deque<int> probe = rr_queue;
    std::map<int, long> one_period;
    for (int t = 0; t < period; ++t)
      for (const auto& [ue, rbs] : allocate_round_robin(probe, rb_budget,
                                                        ues_per_tti))
        one_period[ue] += rbs;
    require(probe == rr_queue, "round-robin period did not close");
    for (const auto& [ue, rbs] : one_period) totals[ue] += rbs * full_periods;
  }
  for (long t = 0; t < leftover; ++t)
    for (const auto& [ue, rbs] : allocate_round_robin(rr_queue, rb_budget,
                                                      ues_per_tti))
      totals[ue] += rbs;
  return totals;
}

}  // namespace lbsim::sched
