#pragma once

#include <deque>
#include <map>
#include <vector>

// Round-robin resource-block scheduling. One TTI serves the queue head:
// up to ues_per_tti UEs split the budget evenly, the division remainder
// goes one RB each to the earliest-queued of them, and the served UEs
// rotate to the queue tail in order.
//
// With attachment fixed, the rotation makes the schedule periodic, so a
// whole epoch collapses to: one period simulated once and scaled, plus the
// leftover TTIs played out on the live queue. The literal 60,000-TTI loop
// and this closed form agree exactly (the equivalence is tested against a
// brute-force queue simulator).

namespace lbsim::sched {

// One TTI. Returns (ue, rbs) in served order; rotates the queue.
std::vector<std::pair<int, int>> allocate_round_robin(std::deque<int>& rr_queue,
                                                      int rb_budget,
                                                      int ues_per_tti);

// num_ttis TTIs of the above, in closed form. Returns the summed RB grants
// per UE (RB-TTIs) and leaves the queue exactly as the literal loop would.
std::map<int, long> schedule_epoch(std::deque<int>& rr_queue, int rb_budget,
                                   int ues_per_tti, long num_ttis);

}  // namespace lbsim::sched
