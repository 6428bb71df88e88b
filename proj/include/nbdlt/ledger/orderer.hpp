#ifndef NBDLT_LEDGER_ORDERER_HPP
#define NBDLT_LEDGER_ORDERER_HPP

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "nbdlt/crypto/ecdsa.hpp"
#include "nbdlt/error.hpp"
#include "nbdlt/ledger/types.hpp"

namespace nbdlt::ledger {

struct OrdererConfig {
  int block_size = 30;
  sim::SimTime batch_timeout = sim::seconds(2);
  sim::SimTime block_proc_base = sim::ms(50);    // fixed ordering/validation cost
  sim::SimTime block_proc_per_tx = sim::ms(10);  // scales with block capacity
};

enum class SubmitFailure {
  insufficient_endorsements,
  duplicate_endorser,
  unknown_endorser,
  bad_endorsement_signature,
};

inline const char* to_string(SubmitFailure f) {
  switch (f) {
    case SubmitFailure::insufficient_endorsements: return "insufficient_endorsements";
    case SubmitFailure::duplicate_endorser: return "duplicate_endorser";
    case SubmitFailure::unknown_endorser: return "unknown_endorser";
    case SubmitFailure::bad_endorsement_signature: return "bad_endorsement_signature";
  }
  return "?";
}

struct SubmitOutcome {
  bool accepted = false;
  std::optional<SubmitFailure> failure;
};

// Ordering service: admission-checks endorsed transactions, batches them, and
// cuts blocks either when the batch is full or when the oldest pending
// transaction has waited batch_timeout.  Event timing (arming the timeout)
// belongs to the caller; this class only decides and assembles.
class OrdererCore {
 public:
  OrdererCore(OrdererConfig cfg, EndorsementPolicy policy,
              std::map<std::string, Bytes> peer_public_keys,
              const crypto::Digest& genesis_hash)
      : cfg_(cfg),
        policy_(policy),
        peer_keys_(std::move(peer_public_keys)),
        prev_hash_(genesis_hash) {
    require(cfg_.block_size >= 1, "orderer: block_size must be at least 1");
    require(policy_.required >= 1 &&
                policy_.required <= static_cast<int>(peer_keys_.size()),
            "orderer: endorsement policy exceeds peer pool");
  }

  const OrdererConfig& config() const { return cfg_; }

  // Fixed per-block processing latency from cut to delivery-ready: the base
  // cost plus the per-slot cost of the configured batch capacity.
  sim::SimTime processing_delay() const {
    return cfg_.block_proc_base + cfg_.block_proc_per_tx * cfg_.block_size;
  }

  SubmitOutcome submit(EndorsedTransaction etx, sim::SimTime now,
                       crypto::SignatureVerifier& verifier) {
    // Endorsement lists with repeated peers violate the endorsed-transaction
    // invariant outright; reject regardless of count.
    std::unordered_set<std::string> names;
    for (const auto& e : etx.endorsements)
      if (!names.insert(e.peer).second)
        return {false, SubmitFailure::duplicate_endorser};

    int valid = 0;
    bool saw_bad_signature = false;
    for (const auto& e : etx.endorsements) {
      auto it = peer_keys_.find(e.peer);
      if (it == peer_keys_.end()) return {false, SubmitFailure::unknown_endorser};
      if (verifier.verify(it->second, etx.proposal.tx_id, e.sig))
        valid++;
      else
        saw_bad_signature = true;
    }
    if (valid < policy_.required) {
      return {false, saw_bad_signature
                         ? SubmitFailure::bad_endorsement_signature
                         : SubmitFailure::insufficient_endorsements};
    }

    pending_.push_back({std::move(etx), now});
    return {true, std::nullopt};
  }

  bool has_pending() const { return !pending_.empty(); }
  std::size_t pending_count() const { return pending_.size(); }

  sim::SimTime oldest_arrival() const {
    require(!pending_.empty(), "orderer: no pending transactions");
    return pending_.front().arrival;
  }

  bool batch_full() const {
    return static_cast<int>(pending_.size()) >= cfg_.block_size;
  }

  // Cuts a block from everything pending (never more than block_size, since
  // the caller cuts as soon as the batch fills).
  Block cut(sim::SimTime now) {
    require(!pending_.empty(), "orderer: cut with empty batch");
    require(static_cast<int>(pending_.size()) <= cfg_.block_size,
            "orderer: batch overflow");
    (void)now;
    Block b;
    b.height = next_height_;
    b.prev_hash = prev_hash_;
    for (auto& p : pending_) b.txs.push_back(std::move(p.etx));
    pending_.clear();
    b.block_hash = compute_block_hash(b);
    next_height_++;
    prev_hash_ = b.block_hash;
    return b;
  }

 private:
  struct Pending {
    EndorsedTransaction etx;
    sim::SimTime arrival;
  };

  OrdererConfig cfg_;
  EndorsementPolicy policy_;
  std::map<std::string, Bytes> peer_keys_;
  std::deque<Pending> pending_;
  std::uint64_t next_height_ = 1;
  crypto::Digest prev_hash_;
};

}  // namespace nbdlt::ledger

#endif
