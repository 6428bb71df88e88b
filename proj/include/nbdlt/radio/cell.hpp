#ifndef NBDLT_RADIO_CELL_HPP
#define NBDLT_RADIO_CELL_HPP

#include <deque>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nbdlt/error.hpp"
#include "nbdlt/radio/cell_config.hpp"
#include "nbdlt/radio/messages.hpp"
#include "nbdlt/radio/timing.hpp"
#include "nbdlt/sim/engine.hpp"

namespace nbdlt::radio {

enum class RrcState { idle, random_access, setup, connected };

inline const char* to_string(RrcState s) {
  switch (s) {
    case RrcState::idle: return "idle";
    case RrcState::random_access: return "random_access";
    case RrcState::setup: return "setup";
    case RrcState::connected: return "connected";
  }
  return "?";
}

struct UeContext {
  int index = -1;
  std::string name;
  int ce_level = 0;
  RrcState rrc = RrcState::idle;
  int ra_attempts = 0;          // within the current procedure
  std::uint64_t activity_epoch = 0;
};

using DeliveryFn = std::function<void(sim::SimTime)>;

struct RadioCellHooks {
  // Fires once per completed transmission, uplink and downlink alike.
  std::function<void(const RadioMessage&, sim::SimTime)> on_delivered;
  // Outcome of one preamble attempt at occasion resolution.
  std::function<void(int ue, int attempt, bool success)> on_ra_attempt;
  // Procedure gave up; carries the uplink messages that were waiting.
  std::function<void(int ue, std::vector<RadioMessage> dropped)> on_ra_failed;
  std::function<void(int ue)> on_connected;
  std::function<void(int ue)> on_idle;
};

// One NB-IoT cell: contention random access on periodic NPRACH occasions and
// two shared half-duplex carriers (one UL, one DL) served strictly FIFO.
class RadioCell {
 public:
  RadioCell(sim::Engine& eng, CellConfig cfg, RadioCellHooks hooks = {})
      : eng_(eng), cfg_(std::move(cfg)), hooks_(std::move(hooks)) {
    eng_.rng().register_stream("preamble");
    eng_.rng().register_stream("backoff");
  }

  const CellConfig& config() const { return cfg_; }

  int add_ue(std::string name, int ce_level = 0) {
    repetitions(cfg_, ce_level);  // bounds check
    UeState u;
    u.ctx.index = static_cast<int>(ues_.size());
    u.ctx.name = std::move(name);
    u.ctx.ce_level = ce_level;
    ues_.push_back(std::move(u));
    return ues_.back().ctx.index;
  }

  int ue_count() const { return static_cast<int>(ues_.size()); }
  UeContext& ue(int index) { return state(index).ctx; }

  // Time at which a UE waking at `wake` has acquired MIB and SIB1.
  sim::SimTime sync_complete(sim::SimTime wake) const {
    return sync_complete_time(wake, cfg_);
  }

  // High-level uplink entry point: connects on demand, queueing the message
  // until the UE can transmit (or piggybacking it on RA completion).
  void submit_ul(int index, RadioMessage msg, DeliveryFn cb) {
    UeState& u = state(index);
    msg.ue = index;
    msg.dir = Direction::ul;
    switch (u.ctx.rrc) {
      case RrcState::connected:
        transmit_ul(index, std::move(msg), std::move(cb));
        break;
      case RrcState::idle:
        u.ul_queue.push_back({std::move(msg), std::move(cb)});
        start_random_access(index);
        break;
      case RrcState::random_access:
      case RrcState::setup:
        u.ul_queue.push_back({std::move(msg), std::move(cb)});
        break;
    }
  }

  // Strict NPUSCH transmission; calling this for an unconnected UE is a
  // sequencing bug in the caller.
  void transmit_ul(int index, RadioMessage msg, DeliveryFn cb) {
    UeState& u = state(index);
    if (u.ctx.rrc != RrcState::connected)
      throw InvariantError("transmit_ul: " + u.ctx.name + " is " +
                           std::string(to_string(u.ctx.rrc)) +
                           ", not connected");
    msg.ue = index;
    msg.dir = Direction::ul;
    raw_ul(u, std::move(msg), std::move(cb));
  }

  // Downlink towards a UE; parked while the UE is unreachable and flushed in
  // order once it connects.
  void send_dl(int index, RadioMessage msg, DeliveryFn cb) {
    UeState& u = state(index);
    msg.ue = index;
    msg.dir = Direction::dl;
    if (u.ctx.rrc == RrcState::connected) {
      raw_dl(u, std::move(msg), std::move(cb));
    } else {
      u.dl_parked.push_back({std::move(msg), std::move(cb)});
    }
  }

  void start_random_access(int index) {
    UeState& u = state(index);
    if (u.ctx.rrc != RrcState::idle)
      throw InvariantError("start_random_access: " + u.ctx.name +
                           " is not idle");
    u.ctx.rrc = RrcState::random_access;
    u.ctx.ra_attempts = 0;
    attempt_ra(u);
  }

 private:
  struct PendingMsg {
    RadioMessage msg;
    DeliveryFn cb;
  };

  struct UeState {
    UeContext ctx;
    std::deque<PendingMsg> ul_queue;
    std::deque<PendingMsg> dl_parked;
  };

  struct Registration {
    int ue;
    int preamble;
  };

  UeState& state(int index) {
    require(index >= 0 && index < static_cast<int>(ues_.size()),
            "unknown UE index");
    return ues_[index];
  }

  void attempt_ra(UeState& u) {
    u.ctx.ra_attempts++;
    const sim::SimTime occ = next_multiple(eng_.now(), cfg_.nprach_period);
    const int preamble =
        static_cast<int>(eng_.rng().uniform_int("preamble", cfg_.preamble_pool));
    auto& regs = occasions_[occ];
    regs.push_back({u.ctx.index, preamble});
    eng_.record(u.ctx.name, "ra.attempt", preamble,
                "occasion_us=" + std::to_string(occ.count()) +
                    ";attempt=" + std::to_string(u.ctx.ra_attempts));
    if (regs.size() == 1) {
      eng_.schedule(occ + cfg_.rar_window, "cell", "ra.resolve",
                    [this, occ] { resolve_occasion(occ); });
    }
  }

  void resolve_occasion(sim::SimTime occ) {
    auto it = occasions_.find(occ);
    require(it != occasions_.end(), "occasion resolved twice");
    std::vector<Registration> regs = std::move(it->second);
    occasions_.erase(it);

    std::map<int, int> uses;
    for (const auto& r : regs) uses[r.preamble]++;

    for (const auto& r : regs) {
      UeState& u = state(r.ue);
      const bool success = uses[r.preamble] == 1;
      if (hooks_.on_ra_attempt)
        hooks_.on_ra_attempt(r.ue, u.ctx.ra_attempts, success);
      if (success) {
        ra_succeeded(u);
      } else {
        ra_collided(u);
      }
    }
  }

  void ra_succeeded(UeState& u) {
    // Contention resolution: msg3 up, msg4 down, then the RRC/NAS setup
    // exchange before user-plane data flows.
    const int index = u.ctx.index;
    RadioMessage msg3;
    msg3.cls = MsgClass::signaling;
    msg3.ue = index;
    msg3.dir = Direction::ul;
    msg3.app_bytes = static_cast<std::uint32_t>(cfg_.ra_signaling_bytes);
    raw_ul(u, std::move(msg3), [this, index](sim::SimTime) {
      UeState& u2 = state(index);
      RadioMessage msg4;
      msg4.cls = MsgClass::signaling;
      msg4.ue = index;
      msg4.dir = Direction::dl;
      msg4.app_bytes = static_cast<std::uint32_t>(cfg_.ra_signaling_bytes);
      raw_dl(u2, std::move(msg4),
             [this, index](sim::SimTime) { ra_complete(index); });
    });
  }

  void ra_collided(UeState& u) {
    if (u.ctx.ra_attempts >= cfg_.max_ra_attempts) {
      u.ctx.rrc = RrcState::idle;
      std::vector<RadioMessage> dropped;
      for (auto& p : u.ul_queue) dropped.push_back(std::move(p.msg));
      u.ul_queue.clear();
      eng_.record(u.ctx.name, "ra.failed",
                  static_cast<std::int64_t>(dropped.size()), "gave_up");
      if (hooks_.on_ra_failed) hooks_.on_ra_failed(u.ctx.index, std::move(dropped));
      return;
    }
    const auto backoff = sim::us(static_cast<std::int64_t>(
        eng_.rng().uniform_int("backoff", cfg_.backoff_max.count() + 1)));
    const int index = u.ctx.index;
    eng_.schedule_in(backoff, u.ctx.name, "ra.retry",
                     [this, index] { attempt_ra(state(index)); });
  }

  void ra_complete(int index) {
    UeState& u = state(index);
    u.ctx.rrc = RrcState::setup;
    eng_.record(u.ctx.name, "ra.complete", u.ctx.ra_attempts, "");

    // Control-plane optimization: a small head-of-queue PDU rides the RA
    // completion itself instead of waiting for setup and an NPUSCH grant.
    if (cfg_.cp_ciot && !u.ul_queue.empty() &&
        u.ul_queue.front().msg.total_bytes() <=
            static_cast<std::uint32_t>(cfg_.cp_ciot_max_bytes)) {
      PendingMsg head = std::move(u.ul_queue.front());
      u.ul_queue.pop_front();
      deliver(head.msg, "cp_ciot");
      if (head.cb) head.cb(eng_.now());
    }

    eng_.schedule_in(cfg_.connected_setup, u.ctx.name, "rrc.setup_complete",
                     [this, index] { setup_complete(index); });
  }

  void setup_complete(int index) {
    UeState& u = state(index);
    require(u.ctx.rrc == RrcState::setup, "setup_complete in wrong state");
    u.ctx.rrc = RrcState::connected;
    touch_activity(u);
    if (hooks_.on_connected) hooks_.on_connected(index);
    while (!u.ul_queue.empty()) {
      PendingMsg p = std::move(u.ul_queue.front());
      u.ul_queue.pop_front();
      raw_ul(u, std::move(p.msg), std::move(p.cb));
    }
    while (!u.dl_parked.empty()) {
      PendingMsg p = std::move(u.dl_parked.front());
      u.dl_parked.pop_front();
      raw_dl(u, std::move(p.msg), std::move(p.cb));
    }
  }

  void raw_ul(UeState& u, RadioMessage msg, DeliveryFn cb) {
    touch_activity(u);
    const auto dur = ul_duration(msg.total_bytes(), u.ctx.ce_level, cfg_);
    const auto start = std::max(eng_.now(), ul_busy_until_);
    ul_busy_until_ = start + dur;
    const int index = u.ctx.index;
    eng_.schedule(ul_busy_until_, u.ctx.name, "ul.delivered",
                  [this, index, msg = std::move(msg), cb = std::move(cb)]() mutable {
                    touch_activity(state(index));
                    deliver(msg, "npusch");
                    if (cb) cb(eng_.now());
                  });
  }

  void raw_dl(UeState& u, RadioMessage msg, DeliveryFn cb) {
    touch_activity(u);
    const auto dur = dl_duration(msg.total_bytes(), u.ctx.ce_level, cfg_);
    const auto start = std::max(eng_.now(), dl_busy_until_);
    dl_busy_until_ = start + dur;
    const int index = u.ctx.index;
    eng_.schedule(dl_busy_until_, u.ctx.name, "dl.delivered",
                  [this, index, msg = std::move(msg), cb = std::move(cb)]() mutable {
                    touch_activity(state(index));
                    deliver(msg, "npdsch");
                    if (cb) cb(eng_.now());
                  });
  }

  void deliver(RadioMessage& msg, const char* channel) {
    msg.serial = ++serial_;
    eng_.record(state(msg.ue).ctx.name, "radio.tx", msg.total_bytes(),
                std::string(to_string(msg.dir)) + ";" + to_string(msg.cls) +
                    ";bytes=" + std::to_string(msg.total_bytes()) + ";" + channel +
                    (msg.tx_id ? ";tx=" + msg.tx_id->short_hex() : ""));
    if (hooks_.on_delivered) hooks_.on_delivered(msg, eng_.now());
  }

  void touch_activity(UeState& u) {
    const std::uint64_t epoch = ++u.ctx.activity_epoch;
    const int index = u.ctx.index;
    eng_.schedule_in(cfg_.inactivity, u.ctx.name, "rrc.inactivity_check",
                     [this, index, epoch] {
                       UeState& u2 = state(index);
                       if (u2.ctx.rrc == RrcState::connected &&
                           u2.ctx.activity_epoch == epoch) {
                         u2.ctx.rrc = RrcState::idle;
                         eng_.record(u2.ctx.name, "rrc.idle", 0, "inactivity");
                         if (hooks_.on_idle) hooks_.on_idle(index);
                       }
                     });
  }

  sim::Engine& eng_;
  CellConfig cfg_;
  RadioCellHooks hooks_;
  std::vector<UeState> ues_;
  std::map<sim::SimTime, std::vector<Registration>> occasions_;
  sim::SimTime ul_busy_until_{0};
  sim::SimTime dl_busy_until_{0};
  std::uint64_t serial_ = 0;
};

}  // namespace nbdlt::radio

#endif
