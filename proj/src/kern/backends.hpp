#pragma once

#include "lbsim/kern/ops.hpp"

// Internal declarations shared between the backend translation units and the
// dispatcher. Not installed; include only from src/kern/.

namespace lbsim::kern {

extern const Ops kScalarOps;

#if defined(__x86_64__) || defined(__i386__)
extern const Ops kAvx2Ops;
#endif

}  // namespace lbsim::kern
