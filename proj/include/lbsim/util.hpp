#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace lbsim {

// Shortest-round-trip-safe decimal form: 17 significant digits reproduce the
// exact double on reload, which keeps emitted files byte-stable and their
// numbers recomputable.
inline std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Streams all parts into one string: msg("epoch ", e, ": bad row").
template <class... Parts>
std::string msg(Parts&&... parts) {
  std::ostringstream os;
  (os << ... << std::forward<Parts>(parts));
  return os.str();
}

template <class... Parts>
[[noreturn]] void fail(Parts&&... parts) {
  throw std::runtime_error(msg(std::forward<Parts>(parts)...));
}

template <class... Parts>
void require(bool ok, Parts&&... parts) {
  if (!ok) fail(std::forward<Parts>(parts)...);
}

}  // namespace lbsim
