#ifndef NBDLT_SIM_ENGINE_HPP
#define NBDLT_SIM_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "nbdlt/error.hpp"
#include "nbdlt/sim/random.hpp"
#include "nbdlt/sim/time.hpp"
#include "nbdlt/sim/trace.hpp"

namespace nbdlt::sim {

// Discrete-event core.  Events fire in (time, insertion order); ties on time
// are FIFO, which is what makes runs bit-for-bit reproducible.
class Engine {
 public:
  explicit Engine(std::uint64_t seed) : rng_(seed) {}

  SimTime now() const { return now_; }
  RandomStreams& rng() { return rng_; }

  void enable_trace(bool on) { trace_enabled_ = on; }
  const RunTrace& trace() const { return trace_; }
  RunTrace take_trace() { return std::move(trace_); }

  void schedule(SimTime at, std::string actor, std::string kind,
                std::function<void()> fn) {
    if (at < now_)
      throw InvariantError("schedule: event at " + std::to_string(at.count()) +
                           "us is before current clock " +
                           std::to_string(now_.count()) + "us");
    queue_.push(Event{at, next_seq_++, std::move(actor), std::move(kind),
                      std::move(fn)});
  }

  void schedule_in(SimTime delay, std::string actor, std::string kind,
                   std::function<void()> fn) {
    schedule(now_ + delay, std::move(actor), std::move(kind), std::move(fn));
  }

  // Metric hook for components that want their activity visible in the run
  // trace (and in trace.csv exports).
  void record(std::string actor, std::string kind, std::int64_t value,
              std::string detail) {
    if (!trace_enabled_) return;
    trace_.push_back(
        {now_, std::move(actor), std::move(kind), value, std::move(detail)});
  }

  // Runs every event with at <= t_end, then leaves the clock at t_end.
  // An empty queue just advances the clock.
  void run_until(SimTime t_end) {
    while (!queue_.empty() && queue_.top().at <= t_end) {
      Event ev = pop();
      now_ = ev.at;
      if (trace_enabled_)
        trace_.push_back({now_, ev.actor, ev.kind, 0, {}});
      ev.fn();
    }
    if (t_end > now_) now_ = t_end;
  }

  // Drains the queue completely; the clock ends at the last event.
  void run_to_completion() {
    while (!queue_.empty()) {
      Event ev = pop();
      now_ = ev.at;
      if (trace_enabled_)
        trace_.push_back({now_, ev.actor, ev.kind, 0, {}});
      ev.fn();
    }
  }

  std::size_t pending_events() const { return queue_.size(); }

 private:
  struct Event {
    SimTime at;
    std::uint64_t seq;
    std::string actor;
    std::string kind;
    std::function<void()> fn;
  };

  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  Event pop() {
    // top() is const; moving the closure out before pop() avoids copying it.
    Event ev = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    return ev;
  }

  SimTime now_{0};
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  RandomStreams rng_;
  RunTrace trace_;
  bool trace_enabled_ = false;
};

}  // namespace nbdlt::sim

#endif
