#ifndef NBDLT_SCENARIO_SENSOR_HPP
#define NBDLT_SCENARIO_SENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "nbdlt/bytes.hpp"
#include "nbdlt/sim/random.hpp"

namespace nbdlt::scenario {

// Report payload: reading in milli-units (u32), report sequence (u64),
// zero padding up to the configured payload size.  Real deployments fill the
// tail with further fields; here only the total size matters to the radio.
inline Bytes encode_reading(double value, std::uint64_t seq, int payload_bytes) {
  double milli = std::clamp(value, 0.0, 4294967.0) * 1000.0;
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(std::llround(milli)));
  w.u64(seq);
  Bytes out = w.take();
  out.resize(static_cast<std::size_t>(payload_bytes), std::uint8_t{0});
  return out;
}

struct Reading {
  double value = 0.0;
  std::uint64_t seq = 0;
};

inline std::optional<Reading> decode_reading(const Bytes& payload) {
  ByteReader r(payload);
  std::uint32_t milli = r.u32();
  std::uint64_t seq = r.u64();
  if (!r.ok()) return std::nullopt;
  return Reading{static_cast<double>(milli) / 1000.0, seq};
}

// Payload of a contract-emitted alarm transaction.
inline Bytes encode_alarm_payload(const std::string& sensor, double mean,
                                  int samples) {
  ByteWriter w;
  w.var_str("alarm");
  w.var_str(sensor);
  w.u32(static_cast<std::uint32_t>(
      std::llround(std::clamp(mean, 0.0, 4294967.0) * 1000.0)));
  w.u32(static_cast<std::uint32_t>(samples));
  return w.take();
}

// Gaussian reading source with an optional step: from report index
// step_at_report on, every value is pinned to step_value.
class SensorModel {
 public:
  SensorModel(double mean, double sd, long long step_at_report,
              double step_value, sim::RandomStreams& rng, std::string stream)
      : mean_(mean), sd_(sd), step_at_(step_at_report), step_value_(step_value),
        rng_(&rng), stream_(std::move(stream)) {
    rng.register_stream(stream_);
  }

  double sample(long long report_index) {
    // The gaussian draw happens regardless so that enabling the step does
    // not shift the random stream consumed by later reports.
    double g = rng_->gaussian(stream_, mean_, sd_);
    if (step_at_ >= 0 && report_index >= step_at_) return step_value_;
    return std::max(0.0, g);
  }

 private:
  double mean_;
  double sd_;
  long long step_at_;
  double step_value_;
  sim::RandomStreams* rng_;
  std::string stream_;
};

}  // namespace nbdlt::scenario

#endif
