#ifndef NBDLT_METRICS_LATENCY_HPP
#define NBDLT_METRICS_LATENCY_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "nbdlt/error.hpp"
#include "nbdlt/sim/time.hpp"

namespace nbdlt::metrics {

struct LatencyStats {
  std::size_t n = 0;
  double mean_s = 0.0;
  double p95_s = 0.0;
};

// Nearest-rank percentile: the smallest sample such that at least q of the
// distribution lies at or below it.
inline double percentile(std::vector<double> values, double q) {
  require(!values.empty(), "percentile of empty sample");
  require(q > 0.0 && q <= 1.0, "percentile rank out of range");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(values.size())));
  return values[rank - 1];
}

inline std::optional<LatencyStats> latency_stats(const std::vector<double>& seconds) {
  if (seconds.empty()) return std::nullopt;
  LatencyStats s;
  s.n = seconds.size();
  double sum = 0;
  for (double v : seconds) sum += v;
  s.mean_s = sum / static_cast<double>(s.n);
  s.p95_s = percentile(seconds, 0.95);
  return s;
}

// Fixed-width histogram keyed by bin lower edge in milliseconds.
inline std::map<std::int64_t, std::size_t> histogram_ms(
    const std::vector<double>& seconds, std::int64_t bin_ms = 50) {
  require(bin_ms > 0, "histogram bin must be positive");
  std::map<std::int64_t, std::size_t> h;
  for (double v : seconds) {
    const auto ms = static_cast<std::int64_t>(std::floor(v * 1000.0));
    h[(ms / bin_ms) * bin_ms]++;
  }
  return h;
}

}  // namespace nbdlt::metrics

#endif
