#ifndef TIWIFI_TRACE_HPP
#define TIWIFI_TRACE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rng.hpp"
#include "sim_time.hpp"

namespace tiwifi {

using Position = std::array<double, 3>;  // centimeters

struct TraceSample {
  std::int64_t tick = 0;  // 1 ms index
  Position position{0.0, 0.0, 0.0};
};

// Motion-command source signal for one flow: one sample per millisecond,
// no gaps.
struct SensorTrace {
  std::vector<TraceSample> samples;

  std::int64_t duration_ticks() const {
    return static_cast<std::int64_t>(samples.size());
  }
  const Position& at(std::int64_t tick) const { return samples[tick].position; }
};

struct MotionParams {
  int components = 5;       // sinusoids per axis
  double min_hz = 0.1;      // deliberate-hand-motion band
  double max_hz = 4.0;
  double target_p99_cm = 10.0;  // amplitude normalization target
  double max_abs_cm = 12.0;     // hard bound after normalization
};

// Synthetic hand-motion trace: per axis a sum of random band-limited
// sinusoids, scaled so the 99th-percentile |position| is ~target_p99_cm
// and the absolute maximum never exceeds max_abs_cm. Deterministic in seed.
SensorTrace generate_trace(std::uint64_t seed, std::int64_t duration_ticks,
                           const MotionParams& params);

// Loads a `tick,x,y,z` CSV with contiguous ticks from 0. Throws ConfigError
// with the offending line on malformed input.
SensorTrace load_trace_csv(const std::string& path);

}  // namespace tiwifi

#endif
