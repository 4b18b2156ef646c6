#pragma once

#include <vector>

// The comparison policy: attach to the strongest cell, blind to load. A
// hysteresis margin exists to diagnose ping-ponging but defaults to zero,
// and the headline comparison always runs at zero.

namespace lbsim {

struct MaxSinrPolicy {
  double hysteresis_db = 0.0;
};

// Pure function of its arguments. Returns the strongest cell (lowest index
// on ties); with a positive margin, keeps current_bs unless the best
// alternative beats it by at least hysteresis_db.
int max_sinr_action(const std::vector<double>& sinr_db, int current_bs,
                    double hysteresis_db);

}  // namespace lbsim
