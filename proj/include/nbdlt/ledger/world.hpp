#ifndef NBDLT_LEDGER_WORLD_HPP
#define NBDLT_LEDGER_WORLD_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "nbdlt/bytes.hpp"
#include "nbdlt/crypto/digest.hpp"

namespace nbdlt::ledger {

// Latest committed value per key (key = client name for sensor readings).
class WorldState {
 public:
  struct Entry {
    Bytes payload;
    std::uint64_t height = 0;
    crypto::Digest tx_id;
  };

  void put(const std::string& key, Entry e) { kv_[key] = std::move(e); }

  std::optional<Entry> get(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return kv_.size(); }

 private:
  std::map<std::string, Entry> kv_;
};

}  // namespace nbdlt::ledger

#endif
