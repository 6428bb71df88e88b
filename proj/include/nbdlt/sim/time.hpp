#ifndef NBDLT_SIM_TIME_HPP
#define NBDLT_SIM_TIME_HPP

#include <chrono>
#include <cstdint>

namespace nbdlt::sim {

// Virtual clock resolution is one microsecond.  All durations and instants in
// the simulator are integer microsecond counts; no floating point time.
using SimTime = std::chrono::microseconds;

constexpr SimTime us(std::int64_t n) { return SimTime{n}; }
constexpr SimTime ms(std::int64_t n) { return SimTime{n * 1000}; }
constexpr SimTime seconds(std::int64_t n) { return SimTime{n * 1000000}; }

constexpr std::int64_t count_us(SimTime t) { return t.count(); }

constexpr double to_seconds(SimTime t) {
  return static_cast<double>(t.count()) / 1e6;
}

}  // namespace nbdlt::sim

#endif
