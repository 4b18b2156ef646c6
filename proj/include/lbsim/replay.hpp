#pragma once

#include <vector>

#include "lbsim/rng.hpp"
#include "lbsim/util.hpp"

// Experience replay: a FIFO ring of (S, a, r, S') tuples. Sampling draws a
// uniform batch without replacement; an under-filled buffer reports not
// ready and the caller skips training that step.

namespace lbsim {

struct Experience {
  std::vector<double> s;
  int a;
  double r;
  std::vector<double> s_next;
};

class ReplayBuffer {
 public:
  explicit ReplayBuffer(int capacity) : capacity_(capacity) {
    require(capacity > 0, "replay capacity must be positive");
    ring_.reserve(capacity);
  }

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(ring_.size()); }
  bool ready(int batch_size) const { return size() >= batch_size; }

  // i-th oldest entry, 0 = oldest surviving.
  const Experience& oldest(int i) const {
    require(i >= 0 && i < size(), "replay index ", i, " out of range");
    return ring_[(head_ + i) % capacity_];
  }

  void push(Experience e) {
    if (size() < capacity_) {
      ring_.push_back(std::move(e));
    } else {
      ring_[head_] = std::move(e);  // overwrite the oldest
      head_ = (head_ + 1) % capacity_;
    }
  }

  // batch_size distinct entries, uniform over the buffer; draw count is
  // exactly batch_size (partial Fisher-Yates), keeping RNG streams replayable.
  std::vector<const Experience*> sample(int batch_size, Rng& rng) const {
    require(ready(batch_size), "replay buffer holds ", size(),
            " experiences, need ", batch_size);
    scratch_.resize(size());
    for (int i = 0; i < size(); ++i) scratch_[i] = i;
    std::vector<const Experience*> out(batch_size);
    for (int j = 0; j < batch_size; ++j) {
      const int pick = j + rng.uniform_int(size() - j);
      std::swap(scratch_[j], scratch_[pick]);
      out[j] = &oldest(scratch_[j]);
    }
    return out;
  }

 private:
  int capacity_;
  int head_ = 0;
  std::vector<Experience> ring_;
  mutable std::vector<int> scratch_;
};

}  // namespace lbsim
