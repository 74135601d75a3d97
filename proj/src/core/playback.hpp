#ifndef TIWIFI_PLAYBACK_HPP
#define TIWIFI_PLAYBACK_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "mpdu.hpp"
#include "sim_time.hpp"
#include "trace.hpp"

namespace tiwifi {

// Receiver-side display model; fed by MAC deliveries, sampled at 1 kHz.
class Display {
 public:
  using DisplayedHook = std::function<void(std::int64_t seq, SimTime at)>;

  virtual ~Display() = default;
  virtual void on_reception(const Mpdu& mpdu, SimTime now) = 0;
  // Advances the display clock by one tick and returns the shown position.
  virtual Position on_tick(std::int64_t tick, SimTime now) = 0;

  void set_displayed_hook(DisplayedHook hook) { hook_ = std::move(hook); }

 protected:
  void notify_displayed(std::int64_t seq, SimTime at) {
    if (hook_) hook_(seq, at);
  }

 private:
  DisplayedHook hook_;
};

// Serial playout: received samples queue up and are shown one per tick in
// sequence order; a missing sequence number is skipped, never waited for.
class JitterBufferDisplay : public Display {
 public:
  void on_reception(const Mpdu& mpdu, SimTime now) override;
  Position on_tick(std::int64_t tick, SimTime now) override;

  std::size_t pending() const { return pending_.size(); }
  const Position& value() const { return value_; }

 private:
  std::map<std::int64_t, std::pair<Position, SimTime>> pending_;
  Position value_{0.0, 0.0, 0.0};
};

// Zero-order hold: the newest received sample is shown immediately and held;
// arrivals older than the current one are discarded.
class ZohDisplay : public Display {
 public:
  void on_reception(const Mpdu& mpdu, SimTime now) override;
  Position on_tick(std::int64_t tick, SimTime now) override;

  std::int64_t latest_seq() const { return latest_seq_; }
  const Position& value() const { return value_; }

 private:
  std::int64_t latest_seq_ = -1;
  Position value_{0.0, 0.0, 0.0};
};

// Root-mean-square error per axis between the source trace and the displayed
// per-tick values, over ticks after the warmup interval.
Position rmse(const SensorTrace& source, const std::vector<Position>& displayed,
              std::int64_t warmup_ticks);

}  // namespace tiwifi

#endif
