#ifndef NBDLT_LEDGER_CHAIN_HPP
#define NBDLT_LEDGER_CHAIN_HPP

#include <json.hpp>

#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "nbdlt/error.hpp"
#include "nbdlt/ledger/types.hpp"

namespace nbdlt::ledger {

struct ChainVerifyResult {
  bool ok = true;
  std::string error;
};

// Hash-linked block store.  Block 0 is a fixed empty genesis block.
class Chain {
 public:
  Chain() { blocks_.push_back(make_genesis()); }

  static Block make_genesis() {
    Block g;
    g.height = 0;
    g.prev_hash = crypto::Digest{};  // all zeros
    g.block_hash = compute_block_hash(g);
    return g;
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& tip() const { return blocks_.back(); }
  std::uint64_t height() const { return tip().height; }

  void append(Block b) {
    require(b.height == tip().height + 1, "chain append: height gap");
    require(b.prev_hash == tip().block_hash, "chain append: prev hash mismatch");
    require(b.block_hash == compute_block_hash(b), "chain append: bad block hash");
    blocks_.push_back(std::move(b));
  }

  // Full structural audit: per-block hash, linkage, heights, and global
  // tx_id uniqueness.  Verification recomputes hashes over the canonical
  // encoding, which covers every byte of every transaction.
  ChainVerifyResult verify() const {
    if (blocks_.empty()) return {false, "empty chain"};
    if (blocks_[0].height != 0 || blocks_[0].prev_hash != crypto::Digest{} ||
        !blocks_[0].txs.empty())
      return {false, "malformed genesis"};

    std::unordered_set<crypto::Digest, crypto::DigestHash> seen;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const Block& b = blocks_[i];
      if (b.height != i)
        return {false, "height mismatch at index " + std::to_string(i)};
      if (b.block_hash != compute_block_hash(b))
        return {false, "content hash mismatch at height " + std::to_string(i)};
      if (i > 0 && b.prev_hash != blocks_[i - 1].block_hash)
        return {false, "broken linkage at height " + std::to_string(i)};
      for (const auto& etx : b.txs) {
        if (!seen.insert(etx.proposal.tx_id).second)
          return {false, "duplicate tx_id at height " + std::to_string(i)};
      }
    }
    return {};
  }

  void write_jsonl(std::ostream& os) const {
    for (const Block& b : blocks_) {
      nlohmann::ordered_json j;
      j["height"] = b.height;
      j["prev_hash"] = b.prev_hash.hex();
      j["block_hash"] = b.block_hash.hex();
      j["txs"] = nlohmann::ordered_json::array();
      for (const auto& etx : b.txs) {
        nlohmann::ordered_json t;
        t["tx_id"] = etx.proposal.tx_id.hex();
        t["client"] = etx.proposal.client;
        t["ts"] = etx.proposal.timestamp.count();
        t["payload_size"] = etx.proposal.payload.size();
        auto endorsers = nlohmann::ordered_json::array();
        for (const auto& e : etx.endorsements) endorsers.push_back(e.peer);
        t["endorsers"] = std::move(endorsers);
        j["txs"].push_back(std::move(t));
      }
      os << j.dump() << '\n';
    }
  }

 private:
  std::vector<Block> blocks_;
};

}  // namespace nbdlt::ledger

#endif
