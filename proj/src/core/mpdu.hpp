#ifndef TIWIFI_MPDU_HPP
#define TIWIFI_MPDU_HPP

#include <cstdint>
#include <vector>

#include "sim_time.hpp"
#include "trace.hpp"

namespace tiwifi {

using DeviceId = int;
constexpr DeviceId kApId = 0;

enum class Direction { Downlink, Uplink };

// One 1 kHz application message wrapped as a MAC protocol data unit; the
// unit of queueing, retransmission, and loss.
struct Mpdu {
  std::int64_t seq = 0;  // per-flow, equals the source tick
  int flow = -1;
  DeviceId src = -1;
  DeviceId dst = -1;
  SimTime generated_at = 0;
  SimTime enqueued_at = 0;
  SimTime first_attempt_at = -1;  // set when first bound to a transmission
  std::int64_t payload_bytes = 0;
  TraceSample sample;
  int retry_count = 0;
};

struct Ampdu {
  DeviceId src = -1;
  DeviceId dst = -1;
  std::vector<Mpdu> mpdus;  // ascending seq
  // Sender queue occupancy at transmission start (with the aggregated MPDUs
  // still counted); piggybacked as an unsolicited buffer status report.
  int reported_occupancy = 0;

  bool empty() const { return mpdus.empty(); }
  int size() const { return static_cast<int>(mpdus.size()); }
};

}  // namespace tiwifi

#endif
