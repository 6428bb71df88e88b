#ifndef NBDLT_RADIO_MESSAGES_HPP
#define NBDLT_RADIO_MESSAGES_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "nbdlt/crypto/digest.hpp"

namespace nbdlt::radio {

enum class Direction { ul, dl };

// Application-level message classes.  Everything except `signaling` counts as
// data traffic; RA and RRC exchanges are signaling and stay out of the
// uplink/downlink data ratio.
enum class MsgClass {
  proposal,
  endorsement_response,
  orderer_submit,
  confirmation,
  baseline_data,
  baseline_ack,
  signaling,
};

inline const char* to_string(Direction d) { return d == Direction::ul ? "UL" : "DL"; }

inline const char* to_string(MsgClass c) {
  switch (c) {
    case MsgClass::proposal: return "proposal";
    case MsgClass::endorsement_response: return "endorsement_response";
    case MsgClass::orderer_submit: return "orderer_submit";
    case MsgClass::confirmation: return "confirmation";
    case MsgClass::baseline_data: return "baseline_data";
    case MsgClass::baseline_ack: return "baseline_ack";
    case MsgClass::signaling: return "signaling";
  }
  return "?";
}

struct RadioMessage {
  Direction dir = Direction::ul;
  MsgClass cls = MsgClass::signaling;
  int ue = -1;                    // radio endpoint
  std::uint32_t app_bytes = 0;    // application payload
  std::uint32_t header_bytes = 0; // transport + security + protocol overhead
  std::optional<crypto::Digest> tx_id;  // set when traffic belongs to a transaction
  std::uint64_t serial = 0;             // stamped by the cell on delivery

  std::uint32_t total_bytes() const { return app_bytes + header_bytes; }
  bool is_data() const { return cls != MsgClass::signaling; }
};

}  // namespace nbdlt::radio

#endif
