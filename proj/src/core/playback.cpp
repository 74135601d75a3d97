#include "playback.hpp"

#include <cmath>

#include "error.hpp"

namespace tiwifi {

void JitterBufferDisplay::on_reception(const Mpdu& mpdu, SimTime now) {
  pending_.emplace(mpdu.seq, std::make_pair(mpdu.sample.position, now));
}

Position JitterBufferDisplay::on_tick(std::int64_t tick, SimTime now) {
  (void)tick;
  if (!pending_.empty()) {
    auto it = pending_.begin();
    value_ = it->second.first;
    notify_displayed(it->first, now);
    pending_.erase(it);
  }
  return value_;  // held when the buffer is empty
}

void ZohDisplay::on_reception(const Mpdu& mpdu, SimTime now) {
  if (mpdu.seq <= latest_seq_) {
    return;  // stale sample, a newer one is already shown
  }
  latest_seq_ = mpdu.seq;
  value_ = mpdu.sample.position;
  notify_displayed(mpdu.seq, now);
}

Position ZohDisplay::on_tick(std::int64_t tick, SimTime now) {
  (void)tick;
  (void)now;
  return value_;
}

Position rmse(const SensorTrace& source, const std::vector<Position>& displayed,
              std::int64_t warmup_ticks) {
  const std::int64_t ticks =
      std::min<std::int64_t>(source.duration_ticks(),
                             static_cast<std::int64_t>(displayed.size()));
  if (ticks <= warmup_ticks) {
    throw ConfigError("run shorter than the RMSE warmup interval");
  }
  Position acc{0.0, 0.0, 0.0};
  for (std::int64_t t = warmup_ticks; t < ticks; ++t) {
    for (int axis = 0; axis < 3; ++axis) {
      const double err = displayed[t][axis] - source.at(t)[axis];
      acc[axis] += err * err;
    }
  }
  const double n = static_cast<double>(ticks - warmup_ticks);
  for (int axis = 0; axis < 3; ++axis) {
    acc[axis] = std::sqrt(acc[axis] / n);
  }
  return acc;
}

}  // namespace tiwifi
