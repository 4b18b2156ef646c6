#include "lbsim/baseline.hpp"

#include <cmath>

#include "lbsim/util.hpp"

namespace lbsim {

int max_sinr_action(const std::vector<double>& sinr_db, int current_bs,
                    double hysteresis_db) {
  require(!sinr_db.empty(), "max_sinr_action: empty SINR vector");
  require(current_bs >= 0 && current_bs < static_cast<int>(sinr_db.size()),
          "max_sinr_action: current BS ", current_bs, " out of range");
  require(hysteresis_db >= 0.0 && std::isfinite(hysteresis_db),
          "max_sinr_action: bad hysteresis ", hysteresis_db);
  int best = 0;
  for (int j = 0; j < static_cast<int>(sinr_db.size()); ++j) {
    require(std::isfinite(sinr_db[j]), "max_sinr_action: non-finite SINR");
    if (sinr_db[j] > sinr_db[best]) best = j;
  }
  if (best == current_bs) return current_bs;
  return sinr_db[best] >= sinr_db[current_bs] + hysteresis_db ? best
                                                              : current_bs;
}

}  // namespace lbsim
