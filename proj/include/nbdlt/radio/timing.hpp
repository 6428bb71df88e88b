#ifndef NBDLT_RADIO_TIMING_HPP
#define NBDLT_RADIO_TIMING_HPP

#include <cstdint>

#include "nbdlt/error.hpp"
#include "nbdlt/radio/cell_config.hpp"
#include "nbdlt/sim/time.hpp"

namespace nbdlt::radio {

// Smallest multiple of `period` that is >= t (t itself when aligned).
inline sim::SimTime next_multiple(sim::SimTime t, sim::SimTime period) {
  require(period > sim::us(0), "next_multiple: period must be positive");
  require(t >= sim::us(0), "next_multiple: negative instant");
  const std::int64_t p = period.count();
  const std::int64_t n = (t.count() + p - 1) / p;
  return sim::us(n * p);
}

// Cell acquisition: the UE first catches a MIB boundary, then the following
// SIB1 boundary.  A UE waking exactly on a boundary is already synchronized
// to it.
inline sim::SimTime sync_complete_time(sim::SimTime wake, const CellConfig& cfg) {
  const sim::SimTime mib = next_multiple(wake, cfg.mib_period);
  return next_multiple(mib, cfg.sib1_period);
}

inline int repetitions(const CellConfig& cfg, int ce_level) {
  require(ce_level >= 0 && ce_level < static_cast<int>(cfg.repetitions.size()),
          "coverage enhancement level out of range");
  return cfg.repetitions[ce_level];
}

namespace detail {

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

inline sim::SimTime block_duration(std::uint32_t bytes, int ce_level,
                                   const CellConfig& cfg, sim::SimTime unit,
                                   int bits_per_unit, long peak_bps) {
  if (bytes == 0) return sim::us(0);
  const int rep = repetitions(cfg, ce_level);
  const std::int64_t bits = static_cast<std::int64_t>(bytes) * 8;
  if (cfg.timing_model == TimingModel::resource_unit) {
    const std::int64_t units = ceil_div(bits, bits_per_unit);
    return sim::us(units * unit.count() * rep);
  }
  // peak_rate: serialization time at the nominal peak, repeated per CE level.
  return sim::us(ceil_div(bits * 1000000, peak_bps) * rep);
}

}  // namespace detail

inline sim::SimTime ul_duration(std::uint32_t bytes, int ce_level,
                                const CellConfig& cfg) {
  return detail::block_duration(bytes, ce_level, cfg, cfg.ul_resource_unit,
                                cfg.ul_tbs_bits_per_ru, cfg.ul_peak_bps);
}

inline sim::SimTime dl_duration(std::uint32_t bytes, int ce_level,
                                const CellConfig& cfg) {
  return detail::block_duration(bytes, ce_level, cfg, cfg.dl_subframe,
                                cfg.dl_tbs_bits_per_subframe, cfg.dl_peak_bps);
}

}  // namespace nbdlt::radio

#endif
