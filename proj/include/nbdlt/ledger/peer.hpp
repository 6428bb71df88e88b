#ifndef NBDLT_LEDGER_PEER_HPP
#define NBDLT_LEDGER_PEER_HPP

#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "nbdlt/crypto/ecdsa.hpp"
#include "nbdlt/error.hpp"
#include "nbdlt/ledger/types.hpp"
#include "nbdlt/sim/random.hpp"

namespace nbdlt::ledger {

enum class EndorseFailure { malformed, duplicate, bad_signature };

inline const char* to_string(EndorseFailure f) {
  switch (f) {
    case EndorseFailure::malformed: return "malformed";
    case EndorseFailure::duplicate: return "duplicate";
    case EndorseFailure::bad_signature: return "bad_signature";
  }
  return "?";
}

using CommittedIndex = std::unordered_set<crypto::Digest, crypto::DigestHash>;

// Endorsing peer: simulates the chaincode check and signs proposals it
// accepts.  All peers share one channel state, so duplicate detection runs
// against the common committed index.
class EndorsingPeer {
 public:
  EndorsingPeer(std::string name, crypto::KeyPair keys)
      : name_(std::move(name)), keys_(std::move(keys)) {}

  const std::string& name() const { return name_; }
  const Bytes& public_key() const { return keys_.public_key; }

  std::variant<Endorsement, EndorseFailure> endorse(
      const TransactionProposal& p, const Bytes& client_public_key,
      const CommittedIndex& committed, crypto::SignatureVerifier& verifier) const {
    if (p.payload.empty() ||
        p.tx_id != compute_tx_id(p.client, p.timestamp, p.nonce, p.payload))
      return EndorseFailure::malformed;
    if (committed.count(p.tx_id)) return EndorseFailure::duplicate;
    if (!verifier.verify(client_public_key, p.tx_id, p.client_sig))
      return EndorseFailure::bad_signature;
    return endorse_proposal(name_, keys_.secret, p);
  }

 private:
  std::string name_;
  crypto::KeyPair keys_;
};

// Uniform draw of `count` distinct peer indices out of `pool` via a partial
// Fisher-Yates shuffle on the given stream.
inline std::vector<int> select_peers(sim::RandomStreams& rng,
                                     const std::string& stream, int pool,
                                     int count) {
  require(pool >= 1, "select_peers: empty pool");
  require(count >= 1 && count <= pool, "select_peers: count out of range");
  std::vector<int> idx(pool);
  for (int i = 0; i < pool; ++i) idx[i] = i;
  for (int i = 0; i < count; ++i) {
    const int j =
        i + static_cast<int>(rng.uniform_int(stream, static_cast<std::uint64_t>(pool - i)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace nbdlt::ledger

#endif
