#ifndef TIWIFI_RNG_HPP
#define TIWIFI_RNG_HPP

#include <cstdint>
#include <random>

#include "error.hpp"

namespace tiwifi {

// One independent pseudo-random stream per device. Streams are derived from
// the run seed and a stream id, so adding a station to a topology does not
// perturb the draw sequences of the existing ones.
//
// mt19937_64 has a standard-mandated output sequence; the bounded draw below
// uses rejection sampling instead of std::uniform_int_distribution, whose
// output is implementation-defined. Together this makes (seed, stream_id)
// reproducible across platforms and compilers.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(mix(seed, stream_id)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform draw from [lo, hi], inclusive on both ends.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    TIWIFI_CHECK(lo <= hi, "uniform_int requires lo <= hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) {  // full 64-bit range
      return static_cast<std::int64_t>(engine_());
    }
    // Rejection sampling over the largest multiple of span, unbiased.
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

  // Uniform draw from [0, 1).
  double uniform_real() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform_real();
  }

 private:
  // splitmix64 of seed and stream id; decorrelates nearby (seed, stream) pairs.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace tiwifi

#endif
