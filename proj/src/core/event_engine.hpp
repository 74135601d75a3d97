#ifndef TIWIFI_EVENT_ENGINE_HPP
#define TIWIFI_EVENT_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_set>
#include <vector>

#include "error.hpp"
#include "sim_time.hpp"

namespace tiwifi {

enum class EventKind {
  SampleGeneration,
  BackoffExpiry,
  MediumResolve,
  TxPhase,   // internal step of a frame exchange (SIFS boundary, PPDU end)
  TxEnd,     // medium becomes idle
  DisplayTick,
  RunEnd,
};

// Cancellation token for a scheduled event.
struct EventHandle {
  std::uint64_t id = 0;
  bool valid() const { return id != 0; }
};

struct RunSummary {
  std::uint64_t events_fired = 0;
  SimTime final_clock = 0;
};

// Deterministic single-threaded discrete-event loop. Events with equal fire
// time dispatch in scheduling order, so the order of schedule() calls in
// source code fully determines behavior and runs are bit-reproducible.
class Engine {
 public:
  using Callback = std::function<void()>;

  SimTime now() const { return clock_; }

  EventHandle schedule(SimTime fire_at, EventKind kind, int subject,
                       Callback cb) {
    TIWIFI_CHECK(fire_at >= clock_, "scheduling an event in the past");
    const std::uint64_t id = ++next_id_;
    queue_.push(Record{fire_at, id, kind, subject, std::move(cb)});
    return EventHandle{id};
  }

  // Cancelled events are dropped lazily when they reach the queue head.
  void cancel(EventHandle& handle) {
    if (handle.valid()) {
      cancelled_.insert(handle.id);
      handle.id = 0;
    }
  }

  // Dispatches every pending event with fire_at <= end, then advances the
  // clock to end. Returns early if the queue drains first.
  RunSummary run_until(SimTime end) {
    std::uint64_t fired = 0;
    while (!queue_.empty() && queue_.top().fire_at <= end) {
      Record rec = queue_.top();
      queue_.pop();
      if (auto it = cancelled_.find(rec.id); it != cancelled_.end()) {
        cancelled_.erase(it);
        continue;
      }
      TIWIFI_CHECK(rec.fire_at >= clock_, "event queue went backwards");
      clock_ = rec.fire_at;
      rec.callback();
      ++fired;
    }
    if (clock_ < end) {
      clock_ = end;
    }
    return RunSummary{fired, clock_};
  }

  bool empty() const { return queue_.size() == cancelled_.size(); }

 private:
  struct Record {
    SimTime fire_at;
    std::uint64_t id;  // insertion sequence, breaks fire_at ties
    EventKind kind;
    int subject;
    Callback callback;
  };

  struct Later {
    bool operator()(const Record& a, const Record& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.id > b.id;
    }
  };

  SimTime clock_ = 0;
  std::uint64_t next_id_ = 0;
  std::priority_queue<Record, std::vector<Record>, Later> queue_;
  std::unordered_set<std::uint64_t> cancelled_;
};

}  // namespace tiwifi

#endif
