#ifndef NBDLT_SIM_TRACE_HPP
#define NBDLT_SIM_TRACE_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "nbdlt/sim/time.hpp"

namespace nbdlt::sim {

// One observable simulator occurrence: an executed event or a recorded metric
// sample (e.g. a completed radio transmission).  `value` carries the numeric
// payload where one exists (byte counts mostly); `detail` is free-form text.
struct TraceRecord {
  SimTime at{0};
  std::string actor;
  std::string kind;
  std::int64_t value = 0;
  std::string detail;

  bool operator==(const TraceRecord&) const = default;
};

using RunTrace = std::vector<TraceRecord>;

inline void write_trace(std::ostream& os, const RunTrace& trace) {
  os << "time_us,actor,kind,detail\n";
  for (const auto& r : trace) {
    os << r.at.count() << ',' << r.actor << ',' << r.kind << ',' << r.detail
       << '\n';
  }
}

}  // namespace nbdlt::sim

#endif
