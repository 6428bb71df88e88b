#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "nbdlt/ledger/chain.hpp"
#include "nbdlt/ledger/committer.hpp"
#include "nbdlt/ledger/contract.hpp"
#include "nbdlt/ledger/orderer.hpp"
#include "nbdlt/ledger/peer.hpp"

using namespace nbdlt;
using namespace nbdlt::ledger;

namespace {

struct Fixture {
  crypto::SignatureVerifier verifier;
  std::vector<EndorsingPeer> peers;
  std::map<std::string, Bytes> peer_pubs;
  crypto::KeyPair client = crypto::derive_keypair(900, "ue0");
  std::uint64_t next_nonce = 0;

  explicit Fixture(int pool = 4) {
    for (int i = 0; i < pool; ++i) {
      std::string name = "peer" + std::to_string(i);
      peers.emplace_back(name, crypto::derive_keypair(900, name));
      peer_pubs[name] = peers.back().public_key();
    }
  }

  EndorsementPolicy policy(int e) const { return EndorsementPolicy{e}; }

  TransactionProposal fresh_proposal(Bytes payload = {1, 2, 3}) {
    return make_proposal("ue0", sim::ms(10), next_nonce++, std::move(payload),
                         client.secret);
  }

  EndorsedTransaction endorsed(const TransactionProposal& p,
                               std::initializer_list<int> by) {
    EndorsedTransaction etx{p, {}};
    for (int i : by)
      etx.endorsements.push_back(
          endorse_proposal(peers[i].name(),
                           crypto::derive_keypair(900, peers[i].name()).secret, p));
    return etx;
  }

  Committer make_committer(int e) {
    return Committer(policy(e), peer_pubs, {{"ue0", client.public_key}});
  }

  OrdererCore make_orderer(int e, OrdererConfig cfg = {}) {
    return OrdererCore(cfg, policy(e), peer_pubs, Chain::make_genesis().block_hash);
  }
};

}  // namespace

TEST_CASE("proposals carry a content digest signed by the client", "[ledger]") {
  Fixture f;
  auto p = f.fresh_proposal({9, 8, 7});
  REQUIRE(p.tx_id == compute_tx_id("ue0", sim::ms(10), 0, {9, 8, 7}));
  REQUIRE(crypto::verify(f.client.public_key, p.tx_id, p.client_sig));
}

TEST_CASE("peers endorse fresh valid proposals and sign the digest", "[ledger]") {
  Fixture f;
  CommittedIndex committed;
  auto p = f.fresh_proposal();
  auto result = f.peers[0].endorse(p, f.client.public_key, committed, f.verifier);
  REQUIRE(std::holds_alternative<Endorsement>(result));
  const auto& e = std::get<Endorsement>(result);
  REQUIRE(e.peer == "peer0");
  REQUIRE(crypto::verify(f.peers[0].public_key(), p.tx_id, e.sig));
}

TEST_CASE("peers reject duplicates, tampering and foreign signatures", "[ledger]") {
  Fixture f;
  CommittedIndex committed;

  auto dup = f.fresh_proposal();
  committed.insert(dup.tx_id);
  auto r1 = f.peers[0].endorse(dup, f.client.public_key, committed, f.verifier);
  REQUIRE(std::get<EndorseFailure>(r1) == EndorseFailure::duplicate);

  auto tampered = f.fresh_proposal({5, 5, 5});
  tampered.payload = {6, 6, 6};  // content no longer matches tx_id
  auto r2 = f.peers[0].endorse(tampered, f.client.public_key, committed, f.verifier);
  REQUIRE(std::get<EndorseFailure>(r2) == EndorseFailure::malformed);

  auto empty = f.fresh_proposal();
  empty.payload.clear();
  auto r3 = f.peers[0].endorse(empty, f.client.public_key, committed, f.verifier);
  REQUIRE(std::get<EndorseFailure>(r3) == EndorseFailure::malformed);

  auto forged = f.fresh_proposal();
  auto wrong_key = crypto::derive_keypair(900, "mallory");
  forged.client_sig = crypto::sign(wrong_key.secret, forged.tx_id);
  auto r4 = f.peers[0].endorse(forged, f.client.public_key, committed, f.verifier);
  REQUIRE(std::get<EndorseFailure>(r4) == EndorseFailure::bad_signature);
}

TEST_CASE("peer selection is uniform and without replacement", "[ledger]") {
  sim::RandomStreams rng(606);
  rng.register_stream("peer-select");

  SECTION("selecting the whole pool returns every peer") {
    auto sel = select_peers(rng, "peer-select", 4, 4);
    REQUIRE(std::set<int>(sel.begin(), sel.end()) == std::set<int>{0, 1, 2, 3});
  }

  SECTION("single selection is uniform") {
    std::array<int, 4> hits{};
    const int n = 10000;
    for (int i = 0; i < n; ++i) hits[select_peers(rng, "peer-select", 4, 1)[0]]++;
    for (int h : hits)
      REQUIRE(std::abs(h / double(n) - 0.25) < 0.02);
  }

  SECTION("pairs are always distinct and every pair occurs") {
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < 2000; ++i) {
      auto sel = select_peers(rng, "peer-select", 4, 2);
      REQUIRE(sel[0] != sel[1]);
      seen.insert({std::min(sel[0], sel[1]), std::max(sel[0], sel[1])});
    }
    REQUIRE(seen.size() == 6);
  }

  SECTION("bounds are enforced") {
    REQUIRE_THROWS_AS(select_peers(rng, "peer-select", 4, 5), InvariantError);
    REQUIRE_THROWS_AS(select_peers(rng, "peer-select", 4, 0), InvariantError);
  }
}

TEST_CASE("orderer admission enforces the endorsement policy", "[ledger]") {
  Fixture f;
  auto orderer = f.make_orderer(2);

  auto ok = f.endorsed(f.fresh_proposal(), {0, 1});
  REQUIRE(orderer.submit(ok, sim::ms(1), f.verifier).accepted);
  REQUIRE(orderer.pending_count() == 1);

  auto short_list = f.endorsed(f.fresh_proposal(), {0});
  auto r1 = orderer.submit(short_list, sim::ms(2), f.verifier);
  REQUIRE_FALSE(r1.accepted);
  REQUIRE(r1.failure == SubmitFailure::insufficient_endorsements);

  auto dup_peer = f.endorsed(f.fresh_proposal(), {0});
  dup_peer.endorsements.push_back(dup_peer.endorsements[0]);
  auto r2 = orderer.submit(dup_peer, sim::ms(3), f.verifier);
  REQUIRE_FALSE(r2.accepted);
  REQUIRE(r2.failure == SubmitFailure::duplicate_endorser);

  auto corrupted = f.endorsed(f.fresh_proposal(), {0, 1});
  corrupted.endorsements[1].sig.bytes[50] ^= 0x10;
  auto r3 = orderer.submit(corrupted, sim::ms(4), f.verifier);
  REQUIRE_FALSE(r3.accepted);
  REQUIRE(r3.failure == SubmitFailure::bad_endorsement_signature);

  auto stranger = f.endorsed(f.fresh_proposal(), {0});
  stranger.endorsements.push_back(
      Endorsement{"peer9", stranger.endorsements[0].sig});
  auto r4 = orderer.submit(stranger, sim::ms(5), f.verifier);
  REQUIRE_FALSE(r4.accepted);
  REQUIRE(r4.failure == SubmitFailure::unknown_endorser);

  REQUIRE(orderer.pending_count() == 1);  // only the valid submission remains
}

TEST_CASE("a full batch cuts immediately at the configured size", "[ledger]") {
  Fixture f;
  OrdererConfig cfg;
  cfg.block_size = 30;
  auto orderer = f.make_orderer(2, cfg);
  for (int i = 0; i < 30; ++i) {
    REQUIRE_FALSE(orderer.batch_full());
    auto etx = f.endorsed(f.fresh_proposal(), {0, 1});
    REQUIRE(orderer.submit(etx, sim::ms(i), f.verifier).accepted);
  }
  REQUIRE(orderer.batch_full());
  Block b = orderer.cut(sim::ms(29));
  REQUIRE(b.txs.size() == 30);
  REQUIRE(b.height == 1);
  REQUIRE(b.prev_hash == Chain::make_genesis().block_hash);
  REQUIRE_FALSE(orderer.has_pending());
}

TEST_CASE("a lone transaction is cut by the batch timeout with size 1", "[ledger]") {
  Fixture f;
  OrdererConfig cfg;
  cfg.block_size = 100;
  auto orderer = f.make_orderer(2, cfg);
  auto etx = f.endorsed(f.fresh_proposal(), {0, 1});
  REQUIRE(orderer.submit(etx, sim::ms(7), f.verifier).accepted);
  REQUIRE_FALSE(orderer.batch_full());
  REQUIRE(orderer.oldest_arrival() == sim::ms(7));
  // the caller fires at oldest_arrival + batch_timeout and cuts
  Block b = orderer.cut(orderer.oldest_arrival() + cfg.batch_timeout);
  REQUIRE(b.txs.size() == 1);
}

TEST_CASE("block processing delay scales with configured capacity", "[ledger]") {
  Fixture f;
  OrdererConfig cfg;
  cfg.block_size = 10;
  auto orderer = f.make_orderer(2, cfg);
  REQUIRE(orderer.processing_delay() == sim::ms(150));  // 50 + 10*10
}

TEST_CASE("valid blocks commit, update state and extend the chain", "[ledger]") {
  Fixture f;
  auto committer = f.make_committer(2);
  auto orderer = f.make_orderer(2);

  std::vector<crypto::Digest> ids;
  for (int i = 0; i < 3; ++i) {
    auto etx = f.endorsed(f.fresh_proposal({std::uint8_t(i), 1, 2}), {1, 3});
    ids.push_back(etx.proposal.tx_id);
    REQUIRE(orderer.submit(etx, sim::ms(i), f.verifier).accepted);
  }
  auto out = committer.validate_and_commit(orderer.cut(sim::ms(3)), f.verifier);

  REQUIRE_FALSE(out.aborted);
  REQUIRE(out.committed.size() == 3);
  REQUIRE(out.validity ==
          std::vector<TxValidity>{TxValidity::valid, TxValidity::valid,
                                  TxValidity::valid});
  REQUIRE(committer.chain().height() == 1);
  auto entry = committer.world().get("ue0");
  REQUIRE(entry.has_value());
  REQUIRE(entry->height == 1);
  REQUIRE(entry->tx_id == ids.back());  // latest write wins
  REQUIRE_FALSE(committer.world().get("ue9").has_value());
}

TEST_CASE("duplicate tx_ids are committed once and only once", "[ledger]") {
  Fixture f;
  auto committer = f.make_committer(2);
  auto orderer = f.make_orderer(2);

  auto p = f.fresh_proposal();
  auto etx = f.endorsed(p, {0, 1});
  REQUIRE(orderer.submit(etx, sim::ms(1), f.verifier).accepted);
  REQUIRE(orderer.submit(etx, sim::ms(1), f.verifier).accepted);  // replay
  auto out = committer.validate_and_commit(orderer.cut(sim::ms(2)), f.verifier);
  REQUIRE(out.validity ==
          std::vector<TxValidity>{TxValidity::valid, TxValidity::invalid_duplicate});

  // replaying in a later block is caught by the committed index
  auto etx2 = f.endorsed(f.fresh_proposal(), {0, 1});
  REQUIRE(orderer.submit(etx, sim::ms(3), f.verifier).accepted);
  REQUIRE(orderer.submit(etx2, sim::ms(3), f.verifier).accepted);
  auto out2 = committer.validate_and_commit(orderer.cut(sim::ms(4)), f.verifier);
  REQUIRE(out2.validity ==
          std::vector<TxValidity>{TxValidity::invalid_duplicate, TxValidity::valid});
}

TEST_CASE("commit re-checks policy and signatures", "[ledger]") {
  Fixture f;
  auto committer = f.make_committer(2);
  auto orderer = f.make_orderer(1);  // lax orderer lets thin endorsements through

  auto thin = f.endorsed(f.fresh_proposal(), {0});
  auto broken = f.endorsed(f.fresh_proposal(), {0, 1});
  broken.endorsements[0].sig.bytes[60] ^= 0x01;
  auto fine = f.endorsed(f.fresh_proposal(), {2, 3});
  REQUIRE(orderer.submit(thin, sim::ms(1), f.verifier).accepted);
  REQUIRE(orderer.submit(broken, sim::ms(1), f.verifier).accepted);
  REQUIRE(orderer.submit(fine, sim::ms(1), f.verifier).accepted);

  auto out = committer.validate_and_commit(orderer.cut(sim::ms(2)), f.verifier);
  REQUIRE(out.validity ==
          std::vector<TxValidity>{TxValidity::invalid_policy,
                                  TxValidity::invalid_signature,
                                  TxValidity::valid});
  REQUIRE(out.committed.size() == 1);
}

TEST_CASE("a block that does not extend the tip aborts the commit", "[ledger]") {
  Fixture f;
  auto committer = f.make_committer(2);
  auto orderer = f.make_orderer(2);

  auto etx = f.endorsed(f.fresh_proposal(), {0, 1});
  REQUIRE(orderer.submit(etx, sim::ms(1), f.verifier).accepted);
  Block b = orderer.cut(sim::ms(2));
  Block forked = b;
  forked.prev_hash.bytes[0] ^= 0xff;
  forked.block_hash = compute_block_hash(forked);

  auto out = committer.validate_and_commit(forked, f.verifier);
  REQUIRE(out.aborted);
  REQUIRE(committer.chain().height() == 0);
  REQUIRE(committer.world().size() == 0);

  // the genuine block still applies afterwards
  REQUIRE_FALSE(committer.validate_and_commit(b, f.verifier).aborted);
  REQUIRE(committer.chain().height() == 1);
}

TEST_CASE("chain verification validates hashes, linkage and uniqueness", "[ledger]") {
  Fixture f;
  auto committer = f.make_committer(2);
  auto orderer = f.make_orderer(2);
  for (int blk = 0; blk < 4; ++blk) {
    for (int i = 0; i < 3; ++i) {
      auto etx = f.endorsed(f.fresh_proposal({std::uint8_t(blk), std::uint8_t(i)}),
                            {0, 2});
      REQUIRE(orderer.submit(etx, sim::ms(blk), f.verifier).accepted);
    }
    REQUIRE_FALSE(
        committer.validate_and_commit(orderer.cut(sim::ms(blk)), f.verifier).aborted);
  }
  REQUIRE(committer.chain().verify().ok);
}

TEST_CASE("any single flipped byte in a serialized block is detected", "[ledger]") {
  Fixture f;
  auto committer = f.make_committer(2);
  auto orderer = f.make_orderer(2);
  for (int i = 0; i < 5; ++i) {
    auto etx = f.endorsed(f.fresh_proposal({std::uint8_t(i), 7}), {0, 1});
    REQUIRE(orderer.submit(etx, sim::ms(i), f.verifier).accepted);
  }
  REQUIRE_FALSE(
      committer.validate_and_commit(orderer.cut(sim::ms(5)), f.verifier).aborted);

  const Block& target = committer.chain().blocks()[1];
  const Bytes wire = serialize_block(target);

  // round trip sanity first
  auto reparsed = parse_block(wire);
  REQUIRE(reparsed.has_value());
  REQUIRE(compute_block_hash(*reparsed) == reparsed->block_hash);

  sim::RandomStreams rng(2721);
  rng.register_stream("flip");
  for (int trial = 0; trial < 300; ++trial) {
    Bytes mutated = wire;
    const auto pos = rng.uniform_int("flip", mutated.size());
    const auto bit = 1u << rng.uniform_int("flip", 8);
    mutated[pos] ^= static_cast<std::uint8_t>(bit);

    auto parsed = parse_block(mutated);
    if (!parsed) continue;  // structural damage: rejected at parse time
    const bool hash_ok = compute_block_hash(*parsed) == parsed->block_hash &&
                         parsed->prev_hash == committer.chain().blocks()[0].block_hash &&
                         parsed->height == 1;
    REQUIRE_FALSE(hash_ok);
  }
}

TEST_CASE("confirmation planning follows the feedback policy", "[ledger]") {
  Fixture f;

  auto commit_n = [&](Committer& committer, OrdererCore& orderer, int n,
                      crypto::SignatureVerifier& v) {
    for (int i = 0; i < n; ++i) {
      auto etx = f.endorsed(f.fresh_proposal(), {0, 1});
      REQUIRE(orderer.submit(etx, sim::ms(1), v).accepted);
    }
    return committer.validate_and_commit(orderer.cut(sim::ms(2)), v);
  };

  SECTION("per_tx: one message per commit") {
    auto committer = f.make_committer(2);
    auto orderer = f.make_orderer(2);
    ConfirmationPlanner planner(ConfirmationPolicy{});
    auto out = commit_n(committer, orderer, 5, f.verifier);
    auto msgs = planner.on_block_committed(out.committed);
    REQUIRE(msgs.size() == 5);
    for (const auto& m : msgs) REQUIRE(m.covers.size() == 1);
  }

  SECTION("per_k_tx: one message per k commits, spanning blocks") {
    auto committer = f.make_committer(2);
    auto orderer = f.make_orderer(2);
    ConfirmationPlanner planner(
        ConfirmationPolicy{ConfirmationPolicy::Mode::per_k_tx, 5, 31});
    auto first = planner.on_block_committed(commit_n(committer, orderer, 3, f.verifier).committed);
    REQUIRE(first.empty());
    auto second = planner.on_block_committed(commit_n(committer, orderer, 7, f.verifier).committed);
    REQUIRE(second.size() == 2);
    REQUIRE(second[0].covers.size() == 5);
    REQUIRE(second[1].covers.size() == 5);
  }

  SECTION("per_block: one message per client per block") {
    crypto::KeyPair other = crypto::derive_keypair(900, "ue1");
    auto committer = f.make_committer(2);
    committer.register_client("ue1", other.public_key);
    auto orderer = f.make_orderer(2);
    ConfirmationPlanner planner(
        ConfirmationPolicy{ConfirmationPolicy::Mode::per_block, 1, 31});

    for (int i = 0; i < 3; ++i) {
      auto etx = f.endorsed(f.fresh_proposal(), {0, 1});
      REQUIRE(orderer.submit(etx, sim::ms(1), f.verifier).accepted);
    }
    auto p = make_proposal("ue1", sim::ms(1), 0, {4, 4}, other.secret);
    auto etx = f.endorsed(p, {0, 1});
    REQUIRE(orderer.submit(etx, sim::ms(1), f.verifier).accepted);

    auto out = committer.validate_and_commit(orderer.cut(sim::ms(2)), f.verifier);
    auto msgs = planner.on_block_committed(out.committed);
    REQUIRE(msgs.size() == 2);
    REQUIRE(msgs[0].client == "ue0");
    REQUIRE(msgs[0].covers.size() == 3);
    REQUIRE(msgs[1].client == "ue1");
    REQUIRE(msgs[1].covers.size() == 1);
  }
}

TEST_CASE("window contract raises on crossings above the threshold", "[ledger]") {
  ContractConfig cfg{450.0, 2};
  WindowAverageContract c(cfg);

  c.begin_block();
  c.record("ue0", 400);
  REQUIRE(c.finish_block().empty());

  c.begin_block();
  c.record("ue0", 600);  // window mean now 500
  auto alarms = c.finish_block();
  REQUIRE(alarms.size() == 1);
  REQUIRE(alarms[0].sensor == "ue0");
  REQUIRE(alarms[0].mean == Catch::Approx(500.0));

  // staying above does not re-fire; dropping below re-arms
  c.begin_block();
  c.record("ue0", 600);
  REQUIRE(c.finish_block().empty());
  c.begin_block();
  c.record("ue0", 100);  // mean 350
  REQUIRE(c.finish_block().empty());
  c.begin_block();
  c.record("ue0", 900);  // mean 500 again
  REQUIRE(c.finish_block().size() == 1);
}

TEST_CASE("window contract stays quiet below the threshold", "[ledger]") {
  WindowAverageContract c(ContractConfig{450.0, 2});
  c.begin_block();
  c.record("ue0", 400);
  c.record("ue0", 400);
  REQUIRE(c.finish_block().empty());
}

TEST_CASE("window contract matches a brute-force oracle on random streams", "[ledger]") {
  sim::RandomStreams rng(888);
  rng.register_stream("reading");
  for (int stream = 0; stream < 100; ++stream) {
    const int window = 6;
    const double threshold = 450.0;
    WindowAverageContract c(ContractConfig{threshold, window});
    std::vector<double> readings;
    std::vector<int> fired;   // reading index at which an alarm fired
    std::vector<int> expect;
    bool above_prev = false;
    for (int i = 0; i < 200; ++i) {
      const double v = 300.0 + 300.0 * rng.uniform("reading");
      readings.push_back(v);

      c.begin_block();
      c.record("s", v);
      if (!c.finish_block().empty()) fired.push_back(i);

      // oracle: recompute the mean of the trailing window from scratch
      double sum = 0;
      int n = 0;
      for (int j = std::max(0, i - window + 1); j <= i; ++j, ++n)
        sum += readings[j];
      const bool above = sum / n > threshold;
      if (above && !above_prev) expect.push_back(i);
      above_prev = above;
    }
    REQUIRE(fired == expect);
  }
}
