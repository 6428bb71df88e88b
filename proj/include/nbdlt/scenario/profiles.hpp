#ifndef NBDLT_SCENARIO_PROFILES_HPP
#define NBDLT_SCENARIO_PROFILES_HPP

#include <string>
#include <vector>

#include "nbdlt/error.hpp"
#include "nbdlt/sim/time.hpp"

namespace nbdlt::scenario {

// Deployment-dependent constants: protocol overheads, network distances and
// platform service times.  The named profiles below are calibrated presets
// for the two bundled studies; tools/calibrate.py reproduces the fit.
struct CalibrationProfile {
  std::string name = "default";

  int header_ul_bytes = 60;   // transport+security stack above app payload, UL
  int header_dl_bytes = 60;   // same for DL
  enum class EndorseResponse { digest, full_proposal };
  EndorseResponse endorse_response = EndorseResponse::digest;
  int baseline_ack_bytes = 4;

  sim::SimTime backhaul = sim::ms(10);        // one-way eNB <-> platform hop
  sim::SimTime endorse_service = sim::ms(5);  // peer-side proposal service
  sim::SimTime connected_setup = sim::ms(100);
  sim::SimTime inactivity = sim::seconds(20);

  sim::SimTime batch_timeout = sim::seconds(2);
  sim::SimTime block_proc_base = sim::ms(50);
  sim::SimTime block_proc_per_tx = sim::ms(10);

  // Endorsement response application bytes: digest mode carries the proposal
  // digest plus the endorsement signature; full_proposal echoes the payload.
  int endorse_response_bytes(int payload_bytes) const {
    const int base = 32 + 72;
    return endorse_response == EndorseResponse::digest ? base
                                                       : payload_bytes + base;
  }
};

inline CalibrationProfile get_profile(const std::string& name) {
  CalibrationProfile p;
  if (name == "default" || name.empty()) return p;
  if (name == "fig5") {
    // Traffic-ratio study: heavier DL stack (per-response security and
    // transport framing observed on the platform side).
    p.name = "fig5";
    p.header_dl_bytes = 163;
    return p;
  }
  if (name == "fig6") {
    // Latency study: short-lived connections, attach-heavy setup, fast
    // ordering tuned so block capacity dominates.
    p.name = "fig6";
    p.backhaul = sim::ms(15);
    p.connected_setup = sim::ms(728);
    p.inactivity = sim::seconds(5);
    p.batch_timeout = sim::ms(30);
    p.block_proc_base = sim::ms(10);
    p.block_proc_per_tx = sim::ms(6);
    return p;
  }
  throw ConfigError({"unknown profile: " + name +
                     " (expected default, fig5 or fig6)"});
}

}  // namespace nbdlt::scenario

#endif
