#ifndef NBDLT_SIM_RANDOM_HPP
#define NBDLT_SIM_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "nbdlt/error.hpp"

namespace nbdlt::sim {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// Named random streams derived from one master seed.  Each stream is an
// independent generator, so consumers (backoff, sensor noise, peer choice...)
// never perturb each other's sequences no matter how often they draw.
class RandomStreams {
 public:
  explicit RandomStreams(std::uint64_t master_seed) : master_seed_(master_seed) {}

  void register_stream(const std::string& name) {
    if (streams_.count(name)) return;
    // Mix the stream name into the master seed; two passes of splitmix64 keep
    // related names (ue0, ue1, ...) from producing related sequences.
    std::uint64_t s =
        detail::splitmix64(detail::splitmix64(master_seed_) ^ detail::fnv1a(name));
    streams_.emplace(name, std::mt19937_64{s});
  }

  bool has_stream(const std::string& name) const { return streams_.count(name) > 0; }

  // Uniform double in [0, 1).
  double uniform(const std::string& name) {
    auto& eng = stream(name);
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound).
  std::uint64_t uniform_int(const std::string& name, std::uint64_t bound) {
    require(bound > 0, "uniform_int: bound must be positive");
    auto& eng = stream(name);
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = eng();
    } while (v >= limit);
    return v % bound;
  }

  // Gaussian via Box-Muller; explicit formula keeps replay stable regardless
  // of standard library internals.
  double gaussian(const std::string& name, double mean, double sd) {
    double u1 = uniform(name);
    double u2 = uniform(name);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64& stream(const std::string& name) {
    auto it = streams_.find(name);
    if (it == streams_.end())
      throw InvariantError("random stream not registered: " + name);
    return it->second;
  }

  std::uint64_t master_seed_;
  std::map<std::string, std::mt19937_64> streams_;
};

}  // namespace nbdlt::sim

#endif
