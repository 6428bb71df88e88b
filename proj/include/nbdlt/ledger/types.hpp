#ifndef NBDLT_LEDGER_TYPES_HPP
#define NBDLT_LEDGER_TYPES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbdlt/bytes.hpp"
#include "nbdlt/crypto/digest.hpp"
#include "nbdlt/crypto/ecdsa.hpp"
#include "nbdlt/sim/time.hpp"

namespace nbdlt::ledger {

// Client-signed write proposal.  tx_id is the digest of the proposal content;
// the client signature and every endorsement sign that digest.
struct TransactionProposal {
  std::string client;
  sim::SimTime timestamp{0};
  std::uint64_t nonce = 0;  // per-client sequence number
  Bytes payload;
  crypto::Digest tx_id;
  crypto::Signature client_sig;
};

struct Endorsement {
  std::string peer;
  crypto::Signature sig;
};

struct EndorsedTransaction {
  TransactionProposal proposal;
  std::vector<Endorsement> endorsements;
};

struct Block {
  std::uint64_t height = 0;
  crypto::Digest prev_hash;
  std::vector<EndorsedTransaction> txs;
  crypto::Digest block_hash;
};

struct EndorsementPolicy {
  int required = 2;  // endorsements from this many distinct peers
};

struct ConfirmationPolicy {
  enum class Mode { per_tx, per_k_tx, per_block };
  Mode mode = Mode::per_tx;
  int k = 1;           // used by per_k_tx
  int dl_bytes = 31;   // application bytes of one confirmation message
};

inline crypto::Digest compute_tx_id(const std::string& client,
                                    sim::SimTime timestamp, std::uint64_t nonce,
                                    const Bytes& payload) {
  ByteWriter w;
  w.var_str(client);
  w.i64(timestamp.count());
  w.u64(nonce);
  w.var_bytes(payload);
  return crypto::sha256(w.bytes());
}

inline TransactionProposal make_proposal(const std::string& client,
                                         sim::SimTime timestamp,
                                         std::uint64_t nonce, Bytes payload,
                                         const Bytes& client_secret) {
  TransactionProposal p;
  p.client = client;
  p.timestamp = timestamp;
  p.nonce = nonce;
  p.payload = std::move(payload);
  p.tx_id = compute_tx_id(p.client, p.timestamp, p.nonce, p.payload);
  p.client_sig = crypto::sign(client_secret, p.tx_id);
  return p;
}

inline Endorsement endorse_proposal(const std::string& peer,
                                    const Bytes& peer_secret,
                                    const TransactionProposal& p) {
  return Endorsement{peer, crypto::sign(peer_secret, p.tx_id)};
}

// --- canonical block encoding ---------------------------------------------
//
// The block hash covers this byte string exactly, so any mutation of any
// serialized field (including signature bytes) changes the hash.

inline void encode_proposal(ByteWriter& w, const TransactionProposal& p) {
  w.var_str(p.client);
  w.i64(p.timestamp.count());
  w.u64(p.nonce);
  w.var_bytes(p.payload);
  w.raw(p.tx_id.bytes);
  w.raw(p.client_sig.bytes.data(), p.client_sig.bytes.size());
}

inline void encode_etx(ByteWriter& w, const EndorsedTransaction& etx) {
  encode_proposal(w, etx.proposal);
  w.u32(static_cast<std::uint32_t>(etx.endorsements.size()));
  for (const auto& e : etx.endorsements) {
    w.var_str(e.peer);
    w.raw(e.sig.bytes.data(), e.sig.bytes.size());
  }
}

inline Bytes encode_block_content(const Block& b) {
  ByteWriter w;
  w.u64(b.height);
  w.raw(b.prev_hash.bytes);
  w.u32(static_cast<std::uint32_t>(b.txs.size()));
  for (const auto& etx : b.txs) encode_etx(w, etx);
  return w.take();
}

inline crypto::Digest compute_block_hash(const Block& b) {
  return crypto::sha256(encode_block_content(b));
}

inline Bytes serialize_block(const Block& b) {
  ByteWriter w;
  w.raw(encode_block_content(b));
  w.raw(b.block_hash.bytes);
  return w.take();
}

inline std::optional<TransactionProposal> decode_proposal(ByteReader& r) {
  TransactionProposal p;
  p.client = r.var_str();
  p.timestamp = sim::us(r.i64());
  p.nonce = r.u64();
  p.payload = r.var_bytes();
  if (!r.raw_into(p.tx_id.bytes)) return std::nullopt;
  if (!r.raw_into(p.client_sig.bytes)) return std::nullopt;
  if (!r.ok()) return std::nullopt;
  return p;
}

inline std::optional<Block> parse_block(const Bytes& data) {
  ByteReader r(data);
  Block b;
  b.height = r.u64();
  if (!r.raw_into(b.prev_hash.bytes)) return std::nullopt;
  const std::uint32_t n_txs = r.u32();
  if (!r.ok() || n_txs > r.remaining()) return std::nullopt;  // length sanity
  for (std::uint32_t i = 0; i < n_txs; ++i) {
    EndorsedTransaction etx;
    auto p = decode_proposal(r);
    if (!p) return std::nullopt;
    etx.proposal = std::move(*p);
    const std::uint32_t n_end = r.u32();
    if (!r.ok() || n_end > r.remaining()) return std::nullopt;
    for (std::uint32_t j = 0; j < n_end; ++j) {
      Endorsement e;
      e.peer = r.var_str();
      if (!r.raw_into(e.sig.bytes)) return std::nullopt;
      etx.endorsements.push_back(std::move(e));
    }
    b.txs.push_back(std::move(etx));
  }
  if (!r.raw_into(b.block_hash.bytes)) return std::nullopt;
  if (!r.ok() || !r.at_end()) return std::nullopt;
  return b;
}

}  // namespace nbdlt::ledger

#endif
