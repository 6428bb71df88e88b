#ifndef NBDLT_METRICS_TRAFFIC_HPP
#define NBDLT_METRICS_TRAFFIC_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "nbdlt/crypto/digest.hpp"
#include "nbdlt/error.hpp"
#include "nbdlt/radio/messages.hpp"

namespace nbdlt::metrics {

struct Counter {
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
};

// Byte accounting over the air interface.  Counts per (direction, class) and
// attributes transaction traffic to its tx_id.  Signaling is tracked but kept
// out of the data ratio.
class TrafficLedger {
 public:
  struct PerTx {
    std::uint64_t ul = 0;
    std::uint64_t dl = 0;
  };

  void record(const radio::RadioMessage& msg) {
    // The cell stamps strictly increasing serials at delivery; anything else
    // means a message was recorded twice or never transmitted.
    require(msg.serial > last_serial_,
            "traffic ledger: message recorded twice or out of order");
    last_serial_ = msg.serial;

    Counter& c = counters_[index(msg.dir)][static_cast<std::size_t>(msg.cls)];
    c.messages++;
    c.bytes += msg.total_bytes();

    if (msg.tx_id) {
      PerTx& t = per_tx_[*msg.tx_id];
      (msg.dir == radio::Direction::ul ? t.ul : t.dl) += msg.total_bytes();
    }
  }

  Counter total(radio::Direction dir, radio::MsgClass cls) const {
    return counters_[index(dir)][static_cast<std::size_t>(cls)];
  }

  std::uint64_t data_bytes(radio::Direction dir) const {
    std::uint64_t sum = 0;
    for (std::size_t c = 0; c < kClasses; ++c)
      if (static_cast<radio::MsgClass>(c) != radio::MsgClass::signaling)
        sum += counters_[index(dir)][c].bytes;
    return sum;
  }

  std::uint64_t signaling_bytes(radio::Direction dir) const {
    return counters_[index(dir)][static_cast<std::size_t>(radio::MsgClass::signaling)]
        .bytes;
  }

  std::uint64_t total_bytes() const {
    std::uint64_t sum = 0;
    for (const auto& side : counters_)
      for (const auto& c : side) sum += c.bytes;
    return sum;
  }

  std::uint64_t total_messages() const {
    std::uint64_t sum = 0;
    for (const auto& side : counters_)
      for (const auto& c : side) sum += c.messages;
    return sum;
  }

  const std::map<crypto::Digest, PerTx>& per_tx() const { return per_tx_; }

  // Mean of per-transaction UL/DL ratios over transactions that received
  // downlink bytes.  Transactions without any downlink cannot form a ratio
  // and are skipped (their count is exposed separately).
  std::optional<double> ratio_mean() const {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& [_, t] : per_tx_) {
      if (t.dl == 0) continue;
      sum += static_cast<double>(t.ul) / static_cast<double>(t.dl);
      n++;
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }

  std::size_t txs_without_dl() const {
    std::size_t n = 0;
    for (const auto& [_, t] : per_tx_)
      if (t.dl == 0) n++;
    return n;
  }

  // Aggregate alternative: total UL data bytes over total DL data bytes.
  std::optional<double> ratio_of_totals() const {
    const std::uint64_t dl = data_bytes(radio::Direction::dl);
    if (dl == 0) return std::nullopt;
    return static_cast<double>(data_bytes(radio::Direction::ul)) /
           static_cast<double>(dl);
  }

 private:
  static constexpr std::size_t kClasses = 7;

  static std::size_t index(radio::Direction d) {
    return d == radio::Direction::ul ? 0 : 1;
  }

  std::array<std::array<Counter, kClasses>, 2> counters_{};
  std::map<crypto::Digest, PerTx> per_tx_;
  std::uint64_t last_serial_ = 0;
};

}  // namespace nbdlt::metrics

#endif
