#ifndef NBDLT_LEDGER_COMMITTER_HPP
#define NBDLT_LEDGER_COMMITTER_HPP

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "nbdlt/crypto/ecdsa.hpp"
#include "nbdlt/ledger/chain.hpp"
#include "nbdlt/ledger/peer.hpp"
#include "nbdlt/ledger/types.hpp"
#include "nbdlt/ledger/world.hpp"

namespace nbdlt::ledger {

enum class TxValidity {
  valid,
  invalid_malformed,
  invalid_duplicate,
  invalid_policy,
  invalid_signature,
};

inline const char* to_string(TxValidity v) {
  switch (v) {
    case TxValidity::valid: return "valid";
    case TxValidity::invalid_malformed: return "malformed";
    case TxValidity::invalid_duplicate: return "duplicate";
    case TxValidity::invalid_policy: return "policy";
    case TxValidity::invalid_signature: return "signature";
  }
  return "?";
}

struct CommitOutcome {
  bool aborted = false;          // tip mismatch; ledger untouched
  std::string abort_reason;
  std::vector<TxValidity> validity;           // one entry per tx, block order
  std::vector<const EndorsedTransaction*> committed;  // valid txs, block order
};

// Peer-side validate-and-commit: re-checks linkage, the endorsement policy
// and all signatures, marks duplicates invalid, then applies valid writes to
// the world state and appends the block.
class Committer {
 public:
  Committer(EndorsementPolicy policy,
            std::map<std::string, Bytes> peer_public_keys,
            std::map<std::string, Bytes> client_public_keys)
      : policy_(policy),
        peer_keys_(std::move(peer_public_keys)),
        client_keys_(std::move(client_public_keys)) {}

  const Chain& chain() const { return chain_; }
  const WorldState& world() const { return world_; }
  const CommittedIndex& committed_ids() const { return committed_; }

  void register_client(const std::string& name, Bytes public_key) {
    client_keys_[name] = std::move(public_key);
  }

  CommitOutcome validate_and_commit(Block block,
                                    crypto::SignatureVerifier& verifier) {
    CommitOutcome out;
    if (block.height != chain_.height() + 1 ||
        block.prev_hash != chain_.tip().block_hash ||
        block.block_hash != compute_block_hash(block)) {
      out.aborted = true;
      out.abort_reason = "block does not extend the local tip";
      return out;
    }

    std::unordered_set<crypto::Digest, crypto::DigestHash> in_block;
    out.validity.reserve(block.txs.size());
    for (const auto& etx : block.txs)
      out.validity.push_back(validate_tx(etx, in_block, verifier));

    chain_.append(block);
    const Block& appended = chain_.tip();
    for (std::size_t i = 0; i < appended.txs.size(); ++i) {
      if (out.validity[i] != TxValidity::valid) continue;
      const auto& etx = appended.txs[i];
      committed_.insert(etx.proposal.tx_id);
      world_.put(etx.proposal.client,
                 {etx.proposal.payload, appended.height, etx.proposal.tx_id});
      out.committed.push_back(&etx);
    }
    return out;
  }

 private:
  TxValidity validate_tx(
      const EndorsedTransaction& etx,
      std::unordered_set<crypto::Digest, crypto::DigestHash>& in_block,
      crypto::SignatureVerifier& verifier) {
    const auto& p = etx.proposal;
    if (p.payload.empty() ||
        p.tx_id != compute_tx_id(p.client, p.timestamp, p.nonce, p.payload))
      return TxValidity::invalid_malformed;
    if (committed_.count(p.tx_id) || !in_block.insert(p.tx_id).second)
      return TxValidity::invalid_duplicate;

    auto client_key = client_keys_.find(p.client);
    if (client_key == client_keys_.end()) return TxValidity::invalid_signature;
    if (!verifier.verify(client_key->second, p.tx_id, p.client_sig))
      return TxValidity::invalid_signature;

    std::unordered_set<std::string> names;
    int valid = 0;
    bool bad_sig = false;
    for (const auto& e : etx.endorsements) {
      if (!names.insert(e.peer).second) return TxValidity::invalid_policy;
      auto it = peer_keys_.find(e.peer);
      if (it == peer_keys_.end()) return TxValidity::invalid_policy;
      if (verifier.verify(it->second, p.tx_id, e.sig))
        valid++;
      else
        bad_sig = true;
    }
    if (valid < policy_.required)
      return bad_sig ? TxValidity::invalid_signature : TxValidity::invalid_policy;
    return TxValidity::valid;
  }

  EndorsementPolicy policy_;
  std::map<std::string, Bytes> peer_keys_;
  std::map<std::string, Bytes> client_keys_;
  Chain chain_;
  WorldState world_;
  CommittedIndex committed_;
};

// Turns a block's committed transactions into confirmation deliveries
// according to the configured feedback policy.  Counters persist across
// blocks so per_k_tx spans block boundaries.
class ConfirmationPlanner {
 public:
  explicit ConfirmationPlanner(ConfirmationPolicy policy) : policy_(policy) {
    require(policy_.k >= 1, "confirmation policy: k must be at least 1");
  }

  struct Delivery {
    std::string client;
    std::vector<crypto::Digest> covers;  // txs acknowledged by this message
  };

  std::vector<Delivery> on_block_committed(
      const std::vector<const EndorsedTransaction*>& committed) {
    std::vector<Delivery> out;
    switch (policy_.mode) {
      case ConfirmationPolicy::Mode::per_tx:
        for (const auto* etx : committed)
          out.push_back({etx->proposal.client, {etx->proposal.tx_id}});
        break;
      case ConfirmationPolicy::Mode::per_k_tx:
        for (const auto* etx : committed) {
          auto& acc = uncovered_[etx->proposal.client];
          acc.push_back(etx->proposal.tx_id);
          if (static_cast<int>(acc.size()) == policy_.k) {
            out.push_back({etx->proposal.client, std::move(acc)});
            acc.clear();
          }
        }
        break;
      case ConfirmationPolicy::Mode::per_block: {
        // one message per client with at least one commit in this block
        std::map<std::string, Delivery> per_client;
        for (const auto* etx : committed) {
          auto& d = per_client[etx->proposal.client];
          d.client = etx->proposal.client;
          d.covers.push_back(etx->proposal.tx_id);
        }
        for (auto& [_, d] : per_client) out.push_back(std::move(d));
        break;
      }
    }
    return out;
  }

 private:
  ConfirmationPolicy policy_;
  std::map<std::string, std::vector<crypto::Digest>> uncovered_;
};

}  // namespace nbdlt::ledger

#endif
