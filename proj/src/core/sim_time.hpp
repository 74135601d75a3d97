#ifndef TIWIFI_SIM_TIME_HPP
#define TIWIFI_SIM_TIME_HPP

#include <cstdint>

namespace tiwifi {

// Simulation time in integer nanoseconds. The finest durations in the model
// (0.8 us guard interval, 9 us slots, 1 ms sampling) are exact multiples,
// so no float drift can accumulate over multi-second runs.
using SimTime = std::int64_t;

constexpr SimTime kNanosecond = 1;
constexpr SimTime kMicrosecond = 1000;
constexpr SimTime kMillisecond = 1000 * kMicrosecond;
constexpr SimTime kSecond = 1000 * kMillisecond;

constexpr SimTime us(std::int64_t v) { return v * kMicrosecond; }
constexpr SimTime ms(std::int64_t v) { return v * kMillisecond; }

constexpr double to_ms(SimTime t) { return static_cast<double>(t) / 1e6; }
constexpr double to_us(SimTime t) { return static_cast<double>(t) / 1e3; }

}  // namespace tiwifi

#endif
