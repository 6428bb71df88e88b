#ifndef NBDLT_SCENARIO_SIMULATION_HPP
#define NBDLT_SCENARIO_SIMULATION_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "nbdlt/crypto/ecdsa.hpp"
#include "nbdlt/error.hpp"
#include "nbdlt/ledger/committer.hpp"
#include "nbdlt/ledger/contract.hpp"
#include "nbdlt/ledger/orderer.hpp"
#include "nbdlt/ledger/peer.hpp"
#include "nbdlt/ledger/types.hpp"
#include "nbdlt/metrics/latency.hpp"
#include "nbdlt/metrics/summary.hpp"
#include "nbdlt/metrics/traffic.hpp"
#include "nbdlt/radio/cell.hpp"
#include "nbdlt/scenario/config.hpp"
#include "nbdlt/scenario/sensor.hpp"
#include "nbdlt/sim/engine.hpp"

namespace nbdlt::scenario {

// One alarm raised by the monitoring contract, from detection at block
// commit to the commit of the alarm transaction it emitted.
struct AlarmRecord {
  sim::SimTime detected{0};
  std::string sensor;
  double window_mean = 0.0;
  int samples = 0;
  std::uint64_t trigger_height = 0;  // block whose readings crossed
  crypto::Digest tx_id;
  std::uint64_t committed_height = 0;  // 0 until the alarm tx commits
  std::optional<sim::SimTime> committed_at;
};

struct RunResult {
  metrics::RunSummary summary;
  std::vector<metrics::PerTxRecord> per_tx;
  std::vector<double> e2e_seconds;  // confirmed transactions, commit order
  std::vector<AlarmRecord> alarms;
  std::uint64_t alarm_txs = 0;
  ledger::Chain chain;
  metrics::TrafficLedger traffic;
  std::optional<double> ratio_of_totals;
  std::uint64_t txs_without_dl = 0;
  sim::RunTrace trace;
};

// Wires one cell, its reporting devices and the ledger platform together and
// drives a complete run.  All randomness comes from the engine's named
// streams, so a (config, seed) pair fully determines every artifact.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg, bool trace = false)
      : cfg_(validated(std::move(cfg))),
        eng_(cfg_.seed),
        committer_(ledger::EndorsementPolicy{cfg_.endorsers}, {}, {}),
        planner_(cfg_.confirmation),
        contract_(cfg_.contract),
        cell_(eng_, cfg_.cell, hooks()) {
    eng_.enable_trace(trace);
    eng_.rng().register_stream("jitter");
    eng_.rng().register_stream("peer-select");

    contract_keys_ = crypto::derive_keypair(cfg_.seed, "contract");
    committer_.register_client("contract", contract_keys_.public_key);

    std::map<std::string, Bytes> peer_keys;
    for (int i = 0; i < cfg_.peer_pool; ++i) {
      std::string name = "peer" + std::to_string(i);
      auto kp = crypto::derive_keypair(cfg_.seed, name);
      peer_keys[name] = kp.public_key;
      peers_.emplace_back(name, std::move(kp));
    }

    for (int i = 0; i < cfg_.n_ues; ++i) {
      std::string name = "ue" + std::to_string(i);
      cell_.add_ue(name, cfg_.ce_level);
      ue_keys_.push_back(crypto::derive_keypair(cfg_.seed, name));
      committer_.register_client(name, ue_keys_.back().public_key);
      sensors_.emplace_back(cfg_.sensor_mean, cfg_.sensor_sd,
                            cfg_.sensor_step_at_report, cfg_.sensor_step_value,
                            eng_.rng(), "sensor" + std::to_string(i));
      next_seq_.push_back(0);
    }

    orderer_.emplace(
        ledger::OrdererConfig{cfg_.block_size, cfg_.profile.batch_timeout,
                              cfg_.profile.block_proc_base,
                              cfg_.profile.block_proc_per_tx},
        ledger::EndorsementPolicy{cfg_.endorsers}, peer_keys,
        committer_.chain().tip().block_hash);

    // The committer needs the full peer key set; rebuild it with clients kept.
    committer_ = ledger::Committer(ledger::EndorsementPolicy{cfg_.endorsers},
                                   std::move(peer_keys), client_key_map());
  }

  const ScenarioConfig& config() const { return cfg_; }

  RunResult run() {
    require(!ran_, "simulation already ran");
    ran_ = true;

    // Devices power on together; synchronization lands every UE on the same
    // broadcast boundary, so the reporting phase within the interval comes
    // from an explicit per-device jitter draw.
    const auto interval_us = static_cast<double>(sim::count_us(cfg_.report_interval));
    const sim::SimTime sync = cell_.sync_complete(sim::us(0));
    for (int i = 0; i < cfg_.n_ues; ++i) {
      const auto phase = sim::us(static_cast<std::int64_t>(
          eng_.rng().uniform("jitter") * interval_us));
      eng_.schedule(sync + phase, ue_name(i), "report",
                    [this, i] { report(i, 0); });
    }

    eng_.run_to_completion();
    return finalize();
  }

 private:
  enum class Phase { in_flight, committed, confirmed, rejected, dropped };

  struct TxState {
    ledger::TransactionProposal proposal;  // default-initialized for baseline
    std::vector<ledger::Endorsement> endorsements;
    int ue = 0;
    sim::SimTime t_gen{0};
    std::optional<sim::SimTime> t_commit;
    std::optional<sim::SimTime> t_confirm;
    Phase phase = Phase::in_flight;
    std::string outcome_detail;
  };

  static std::string ue_name(int i) { return "ue" + std::to_string(i); }

  static ScenarioConfig validated(ScenarioConfig cfg) {
    if (auto v = cfg.validate(); !v.empty()) throw ConfigError(v);
    return cfg;
  }

  std::map<std::string, Bytes> client_key_map() const {
    std::map<std::string, Bytes> m;
    for (int i = 0; i < cfg_.n_ues; ++i) m[ue_name(i)] = ue_keys_[i].public_key;
    m["contract"] = contract_keys_.public_key;
    return m;
  }

  radio::RadioCellHooks hooks() {
    radio::RadioCellHooks h;
    h.on_delivered = [this](const radio::RadioMessage& msg, sim::SimTime) {
      traffic_.record(msg);
    };
    h.on_ra_failed = [this](int, std::vector<radio::RadioMessage> dropped) {
      ra_failures_++;
      for (const auto& msg : dropped)
        if (msg.tx_id)
          if (auto it = txs_.find(*msg.tx_id); it != txs_.end())
            mark_dropped(it->second);
    };
    return h;
  }

  void mark_rejected(TxState& st, std::string why) {
    if (st.phase != Phase::in_flight) return;
    st.phase = Phase::rejected;
    st.outcome_detail = std::move(why);
    rejected_++;
  }

  void mark_dropped(TxState& st) {
    if (st.phase != Phase::in_flight) return;
    st.phase = Phase::dropped;
    st.outcome_detail = "radio access failed";
    dropped_++;
  }

  // --- report generation ----------------------------------------------

  void report(int i, long long report_index) {
    if (generated_ >= cfg_.n_transactions) return;
    generated_++;
    const double value = sensors_[i].sample(report_index);
    const std::uint64_t seq = next_seq_[i]++;
    Bytes payload = encode_reading(value, seq, cfg_.payload_bytes);

    if (cfg_.mode == ScenarioConfig::Mode::dlt)
      start_dlt_tx(i, seq, std::move(payload));
    else
      start_baseline_tx(i, seq, std::move(payload));

    if (generated_ < cfg_.n_transactions)
      eng_.schedule_in(cfg_.report_interval, ue_name(i), "report",
                       [this, i, report_index] { report(i, report_index + 1); });
  }

  // --- ledger reporting path --------------------------------------------

  void start_dlt_tx(int i, std::uint64_t seq, Bytes payload) {
    auto p = ledger::make_proposal(ue_name(i), eng_.now(), seq,
                                   std::move(payload), ue_keys_[i].secret);
    const crypto::Digest id = p.tx_id;
    TxState st;
    st.proposal = std::move(p);
    st.ue = i;
    st.t_gen = eng_.now();
    txs_.emplace(id, std::move(st));

    auto sel = ledger::select_peers(eng_.rng(), "peer-select", cfg_.peer_pool,
                                    cfg_.endorsers);

    radio::RadioMessage m;
    m.cls = radio::MsgClass::proposal;
    m.app_bytes = static_cast<std::uint32_t>(cfg_.payload_bytes);
    m.header_bytes = static_cast<std::uint32_t>(cfg_.profile.header_ul_bytes);
    m.tx_id = id;
    cell_.submit_ul(i, std::move(m),
                    [this, id, sel = std::move(sel)](sim::SimTime) {
                      for (int pi : sel) {
                        eng_.schedule_in(
                            cfg_.profile.backhaul + cfg_.profile.endorse_service,
                            "peer" + std::to_string(pi), "endorse",
                            [this, pi, id] { peer_decide(pi, id); });
                      }
                    });
  }

  void peer_decide(int pi, crypto::Digest id) {
    TxState& st = txs_.at(id);
    auto result = peers_[pi].endorse(st.proposal, ue_keys_[st.ue].public_key,
                                     committer_.committed_ids(), verifier_);
    // The response crosses the backhaul either way before the device learns
    // the outcome over the downlink.
    eng_.schedule_in(cfg_.profile.backhaul, "net", "endorse.response",
                     [this, id, result] {
                       TxState& st2 = txs_.at(id);
                       radio::RadioMessage m;
                       m.cls = radio::MsgClass::endorsement_response;
                       m.app_bytes = static_cast<std::uint32_t>(
                           cfg_.profile.endorse_response_bytes(cfg_.payload_bytes));
                       m.header_bytes =
                           static_cast<std::uint32_t>(cfg_.profile.header_dl_bytes);
                       m.tx_id = id;
                       cell_.send_dl(st2.ue, std::move(m),
                                     [this, id, result](sim::SimTime) {
                                       on_endorse_response(id, result);
                                     });
                     });
  }

  void on_endorse_response(
      const crypto::Digest& id,
      const std::variant<ledger::Endorsement, ledger::EndorseFailure>& result) {
    TxState& st = txs_.at(id);
    if (st.phase != Phase::in_flight) return;
    if (std::holds_alternative<ledger::EndorseFailure>(result)) {
      mark_rejected(st, std::string("endorsement refused: ") +
                            to_string(std::get<ledger::EndorseFailure>(result)));
      return;
    }
    st.endorsements.push_back(std::get<ledger::Endorsement>(result));
    if (static_cast<int>(st.endorsements.size()) == cfg_.endorsers)
      send_orderer_submit(id);
  }

  void send_orderer_submit(const crypto::Digest& id) {
    TxState& st = txs_.at(id);
    ledger::EndorsedTransaction etx{st.proposal, st.endorsements};

    radio::RadioMessage m;
    m.cls = radio::MsgClass::orderer_submit;
    m.app_bytes = static_cast<std::uint32_t>(cfg_.payload_bytes +
                                             72 * cfg_.endorsers);
    m.header_bytes = static_cast<std::uint32_t>(cfg_.profile.header_ul_bytes);
    m.tx_id = id;
    cell_.submit_ul(st.ue, std::move(m),
                    [this, id, etx = std::move(etx)](sim::SimTime) {
                      eng_.schedule_in(cfg_.profile.backhaul, "net", "submit.fwd",
                                       [this, id, etx] {
                                         submit_to_orderer(etx, &id);
                                       });
                    });
  }

  // Shared by device submissions (id set) and contract alarms (id null).
  void submit_to_orderer(ledger::EndorsedTransaction etx,
                         const crypto::Digest* device_tx) {
    auto out = orderer_->submit(std::move(etx), eng_.now(), verifier_);
    if (!out.accepted) {
      require(device_tx != nullptr, "orderer refused a contract transaction");
      mark_rejected(txs_.at(*device_tx),
                    std::string("orderer refused: ") + to_string(*out.failure));
      return;
    }
    if (orderer_->batch_full()) {
      cut_block();
    } else if (orderer_->pending_count() == 1) {
      arm_batch_timer();
    }
  }

  void arm_batch_timer() {
    const std::uint64_t epoch = timer_epoch_;
    eng_.schedule(orderer_->oldest_arrival() + cfg_.profile.batch_timeout,
                  "orderer", "batch.timeout", [this, epoch] {
                    if (epoch != timer_epoch_) return;  // block already cut
                    if (!orderer_->has_pending()) return;
                    cut_block();
                  });
  }

  void cut_block() {
    timer_epoch_++;
    auto block = std::make_shared<ledger::Block>(orderer_->cut(eng_.now()));
    eng_.record("orderer", "block.cut",
                static_cast<std::int64_t>(block->txs.size()),
                "height=" + std::to_string(block->height));
    eng_.schedule_in(orderer_->processing_delay(), "orderer", "block.ready",
                     [this, block] {
                       eng_.schedule_in(cfg_.profile.backhaul, "net",
                                        "block.deliver",
                                        [this, block] { commit_block(*block); });
                     });
  }

  void commit_block(const ledger::Block& block) {
    auto out = committer_.validate_and_commit(block, verifier_);
    require(!out.aborted, "committer aborted: " + out.abort_reason);
    const ledger::Block& appended = committer_.chain().tip();
    eng_.record("committer", "block.commit",
                static_cast<std::int64_t>(out.committed.size()),
                "height=" + std::to_string(appended.height));

    contract_.begin_block();
    for (std::size_t k = 0; k < appended.txs.size(); ++k) {
      const auto& etx = appended.txs[k];
      const bool valid = out.validity[k] == ledger::TxValidity::valid;
      auto it = txs_.find(etx.proposal.tx_id);
      if (it != txs_.end()) {
        TxState& st = it->second;
        if (valid) {
          if (st.phase == Phase::in_flight) {
            st.phase = Phase::committed;
            st.t_commit = eng_.now();
            committed_++;
          }
          if (auto r = decode_reading(etx.proposal.payload))
            contract_.record(etx.proposal.client, r->value);
        } else {
          mark_rejected(st, std::string("commit validation: ") +
                                to_string(out.validity[k]));
        }
      } else if (valid) {
        for (auto& a : alarms_)
          if (a.tx_id == etx.proposal.tx_id) {
            a.committed_height = appended.height;
            a.committed_at = eng_.now();
          }
      }
    }

    for (const auto& alarm : contract_.finish_block())
      emit_alarm(alarm, appended.height);

    std::vector<const ledger::EndorsedTransaction*> device_txs;
    for (const auto* etx : out.committed)
      if (txs_.count(etx->proposal.tx_id)) device_txs.push_back(etx);
    for (auto& d : planner_.on_block_committed(device_txs))
      send_confirmation(std::move(d));
  }

  void send_confirmation(ledger::ConfirmationPlanner::Delivery d) {
    int ue = -1;
    for (int i = 0; i < cfg_.n_ues; ++i)
      if (ue_name(i) == d.client) ue = i;
    require(ue >= 0, "confirmation for unknown client " + d.client);

    radio::RadioMessage m;
    m.cls = radio::MsgClass::confirmation;
    m.app_bytes = static_cast<std::uint32_t>(cfg_.confirmation.dl_bytes);
    m.header_bytes = static_cast<std::uint32_t>(cfg_.profile.header_dl_bytes);
    m.tx_id = d.covers.back();
    eng_.schedule_in(cfg_.profile.backhaul, "net", "confirm.fwd",
                     [this, ue, m = std::move(m), covers = std::move(d.covers)] {
                       cell_.send_dl(ue, m, [this, covers](sim::SimTime t) {
                         for (const auto& id : covers) {
                           TxState& st = txs_.at(id);
                           if (st.phase == Phase::committed) {
                             st.phase = Phase::confirmed;
                             st.t_confirm = t;
                           }
                         }
                       });
                     });
  }

  // Alarms originate at the committing peer: endorsements are gathered over
  // the platform network and the transaction goes to ordering without ever
  // touching the radio.
  void emit_alarm(const ledger::Alarm& alarm, std::uint64_t trigger_height) {
    alarm_txs_++;
    Bytes payload = encode_alarm_payload(alarm.sensor, alarm.mean, alarm.samples);
    auto p = ledger::make_proposal("contract", eng_.now(), alarm_nonce_++,
                                   std::move(payload), contract_keys_.secret);
    AlarmRecord rec;
    rec.detected = eng_.now();
    rec.sensor = alarm.sensor;
    rec.window_mean = alarm.mean;
    rec.samples = alarm.samples;
    rec.trigger_height = trigger_height;
    rec.tx_id = p.tx_id;
    alarms_.push_back(rec);
    eng_.record("contract", "alarm", static_cast<std::int64_t>(alarm.mean),
                "sensor=" + alarm.sensor);

    auto sel = ledger::select_peers(eng_.rng(), "peer-select", cfg_.peer_pool,
                                    cfg_.endorsers);
    eng_.schedule_in(
        2 * cfg_.profile.backhaul + cfg_.profile.endorse_service, "contract",
        "alarm.endorse", [this, p = std::move(p), sel = std::move(sel)] {
          ledger::EndorsedTransaction etx{p, {}};
          for (int pi : sel) {
            auto r = peers_[pi].endorse(p, contract_keys_.public_key,
                                        committer_.committed_ids(), verifier_);
            require(std::holds_alternative<ledger::Endorsement>(r),
                    "alarm proposal refused by endorser");
            etx.endorsements.push_back(std::get<ledger::Endorsement>(r));
          }
          eng_.schedule_in(cfg_.profile.backhaul, "net", "alarm.submit",
                           [this, etx = std::move(etx)] {
                             submit_to_orderer(etx, nullptr);
                           });
        });
  }

  // --- baseline reporting path -------------------------------------------

  void start_baseline_tx(int i, std::uint64_t seq, Bytes payload) {
    const auto id = ledger::compute_tx_id(ue_name(i), eng_.now(), seq, payload);
    TxState st;
    st.ue = i;
    st.t_gen = eng_.now();
    txs_.emplace(id, std::move(st));

    radio::RadioMessage m;
    m.cls = radio::MsgClass::baseline_data;
    m.app_bytes = static_cast<std::uint32_t>(cfg_.payload_bytes);
    m.header_bytes = static_cast<std::uint32_t>(cfg_.profile.header_ul_bytes);
    m.tx_id = id;
    cell_.submit_ul(i, std::move(m), [this, i, id](sim::SimTime) {
      // Up to the server and straight back down with a short ack.
      eng_.schedule_in(2 * cfg_.profile.backhaul, "server", "ack",
                       [this, i, id] {
                         radio::RadioMessage a;
                         a.cls = radio::MsgClass::baseline_ack;
                         a.app_bytes = static_cast<std::uint32_t>(
                             cfg_.profile.baseline_ack_bytes);
                         a.header_bytes = static_cast<std::uint32_t>(
                             cfg_.profile.header_dl_bytes);
                         a.tx_id = id;
                         cell_.send_dl(i, std::move(a), [this, id](sim::SimTime t) {
                           TxState& st = txs_.at(id);
                           if (st.phase != Phase::in_flight) return;
                           st.phase = Phase::confirmed;
                           st.t_confirm = t;
                           committed_++;
                         });
                       });
    });
  }

  // --- result assembly -----------------------------------------------------

  RunResult finalize() {
    for (auto& [id, st] : txs_)
      if (st.phase == Phase::in_flight) mark_dropped(st);
    require(committed_ + rejected_ + dropped_ == generated_,
            "transaction conservation violated");

    std::vector<std::pair<crypto::Digest, const TxState*>> ordered;
    ordered.reserve(txs_.size());
    for (const auto& [id, st] : txs_) ordered.emplace_back(id, &st);
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      if (a.second->t_gen != b.second->t_gen)
        return a.second->t_gen < b.second->t_gen;
      return a.first < b.first;
    });

    RunResult res;
    const auto& per_tx_bytes = traffic_.per_tx();
    for (const auto& [id, st] : ordered) {
      metrics::PerTxRecord r;
      r.tx_id = id;
      r.ue = ue_name(st->ue);
      r.t_gen = st->t_gen;
      r.t_commit = st->t_commit;
      r.t_confirm = st->t_confirm;
      if (auto it = per_tx_bytes.find(id); it != per_tx_bytes.end()) {
        r.ul_bytes = it->second.ul;
        r.dl_bytes = it->second.dl;
      }
      res.per_tx.push_back(std::move(r));
      if (st->t_confirm)
        res.e2e_seconds.push_back(sim::to_seconds(*st->t_confirm - st->t_gen));
    }

    metrics::RunSummary s;
    s.scenario = cfg_.label;
    s.seed = cfg_.seed;
    s.p_bytes = cfg_.payload_bytes;
    const bool dlt = cfg_.mode == ScenarioConfig::Mode::dlt;
    s.endorsers = dlt ? cfg_.endorsers : 0;
    s.block_size = dlt ? cfg_.block_size : 0;
    s.mode = dlt ? "dlt" : "baseline";
    s.ratio_mean = traffic_.ratio_mean();
    if (auto stats = metrics::latency_stats(res.e2e_seconds)) {
      s.e2e_mean_s = stats->mean_s;
      s.e2e_p95_s = stats->p95_s;
    }
    s.generated = generated_;
    s.committed = committed_;
    s.rejected = rejected_;
    s.dropped = dropped_;
    s.ra_failures = ra_failures_;
    s.blocks = committer_.chain().height();
    res.summary = std::move(s);

    res.alarms = alarms_;
    res.alarm_txs = alarm_txs_;
    res.chain = committer_.chain();
    res.traffic = traffic_;
    res.ratio_of_totals = traffic_.ratio_of_totals();
    res.txs_without_dl = traffic_.txs_without_dl();
    res.trace = eng_.take_trace();
    return res;
  }

  ScenarioConfig cfg_;
  sim::Engine eng_;
  crypto::SignatureVerifier verifier_;
  crypto::KeyPair contract_keys_;
  std::vector<crypto::KeyPair> ue_keys_;
  std::vector<ledger::EndorsingPeer> peers_;
  ledger::Committer committer_;
  std::optional<ledger::OrdererCore> orderer_;
  ledger::ConfirmationPlanner planner_;
  ledger::WindowAverageContract contract_;
  radio::RadioCell cell_;
  metrics::TrafficLedger traffic_;
  std::vector<SensorModel> sensors_;
  std::vector<std::uint64_t> next_seq_;

  std::unordered_map<crypto::Digest, TxState, crypto::DigestHash> txs_;
  std::vector<AlarmRecord> alarms_;
  std::uint64_t timer_epoch_ = 0;
  std::uint64_t alarm_nonce_ = 0;
  std::uint64_t generated_ = 0;
  std::uint64_t committed_ = 0;
  std::uint64_t rejected_ = 0;
  std::uint64_t dropped_ = 0;
  std::uint64_t ra_failures_ = 0;
  std::uint64_t alarm_txs_ = 0;
  bool ran_ = false;
};

}  // namespace nbdlt::scenario

#endif
