#ifndef TIWIFI_TX_QUEUE_HPP
#define TIWIFI_TX_QUEUE_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "mpdu.hpp"

namespace tiwifi {

enum class Discipline { Vanilla, Nobus };

const char* discipline_name(Discipline d);
std::optional<Discipline> parse_discipline(const std::string& name);

struct EnqueueReport {
  // The MPDU displaced by a depth-1 replacement, if any (a proactive drop).
  std::optional<Mpdu> replaced;
};

// Outcome of a collided transmission attempt for one destination.
struct CollisionReport {
  std::vector<Mpdu> retry_dropped;      // exceeded the retransmission limit
  std::vector<Mpdu> proactive_dropped;  // displaced by a newer sample
  bool survivor_requeued = false;
};

// Per-destination MAC transmit queue with a pluggable discipline:
//   vanilla - unbounded FIFO, drained by aggregation;
//   nobus   - depth one, a new sample displaces the resident one.
//
// MPDUs bound to an in-flight transmission are moved out of the queue and
// handed back through on_bound_success / on_bound_collision, so the nobus
// depth invariant holds at every event boundary.
class TxQueue {
 public:
  explicit TxQueue(Discipline discipline) : discipline_(discipline) {}

  Discipline discipline() const { return discipline_; }

  EnqueueReport enqueue(Mpdu mpdu);

  // Queue length for a destination, not counting in-flight MPDUs.
  int depth(DeviceId dst) const;
  // Queue length plus MPDUs currently bound to a transmission; this is the
  // occupancy a buffer status report carries at transmission start.
  int occupancy(DeviceId dst) const;
  bool empty() const;
  // Destinations with at least one queued MPDU, ascending id.
  std::vector<DeviceId> backlogged() const;

  // Moves up to max_mpdus for dst out of the queue and marks them in flight.
  // Only MPDUs enqueued at or before snapshot_at are eligible (pass the
  // current time for no filtering); under nobus the single resident MPDU is
  // taken regardless of snapshot, carrying the freshest sample.
  std::vector<Mpdu> bind(DeviceId dst, int max_mpdus, SimTime snapshot_at,
                         SimTime now);

  // The bound transmission was acknowledged; in-flight MPDUs are gone.
  void on_bound_success(DeviceId dst);

  // The bound transmission collided: every in-flight MPDU takes a retry,
  // those over the limit are dropped, survivors return to the queue head
  // (vanilla) or reclaim residence unless a newer sample arrived (nobus).
  CollisionReport on_bound_collision(DeviceId dst, int retry_limit);

  bool has_inflight(DeviceId dst) const;
  std::int64_t proactive_drop_count() const { return proactive_drop_count_; }
  // Queued plus in-flight MPDUs, for end-of-run conservation accounting.
  std::int64_t residual_count() const;
  std::int64_t residual_for(DeviceId dst) const;

 private:
  struct DstState {
    std::deque<Mpdu> fifo;
    std::vector<Mpdu> inflight;
  };

  void check_depth(const DstState& st) const;

  Discipline discipline_;
  std::map<DeviceId, DstState> dsts_;
  std::int64_t proactive_drop_count_ = 0;
};

}  // namespace tiwifi

#endif
