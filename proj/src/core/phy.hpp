#ifndef TIWIFI_PHY_HPP
#define TIWIFI_PHY_HPP

#include <cstdint>
#include <optional>

#include "error.hpp"
#include "sim_time.hpp"

namespace tiwifi {

// Modulation and coding parameters. The coding rate is kept as an exact
// rational so symbol counts come out of integer arithmetic; a 5/6 float
// would mis-round ceil() on some payload sizes.
struct McsParams {
  int bits_per_subcarrier = 8;  // 256-QAM
  std::int64_t coding_num = 5;
  std::int64_t coding_den = 6;
  SimTime symbol_duration = us(12) + 800;  // 12.8 us
  SimTime guard_interval = 800;            // 0.8 us

  SimTime symbol_plus_gi() const { return symbol_duration + guard_interval; }
};

// Usable data tones per resource-unit size. Defaults follow 996-tone-RU
// arithmetic (980 data tones per 80 MHz) scaled to a 320 MHz channel.
struct TonePlan {
  int channel_width_mhz = 320;
  int data_tones_full = 3920;
  int data_tones_half = 1960;
  int data_tones_quarter = 980;
};

// Fixed control-plane durations. These frames are modeled as error-free
// constants; the MAC never randomizes or collides them.
struct AirtimeBudget {
  SimTime max_ppdu_duration = us(5400);  // 5.4 ms cap
  SimTime preamble = us(48);
  SimTime sifs = us(16);
  SimTime back_duration = us(32);     // (multi-STA) Block Ack
  SimTime trigger_duration = us(48);  // UL-OFDMA trigger frame
};

// PHY data rate for a tone allocation, in bits per second (truncated).
inline std::int64_t data_rate(int tones, const McsParams& mcs) {
  TIWIFI_CHECK(tones > 0, "data_rate requires a positive tone count");
  const std::int64_t bits_num = static_cast<std::int64_t>(tones) *
                                mcs.bits_per_subcarrier * mcs.coding_num;
  return bits_num * kSecond / (mcs.coding_den * mcs.symbol_plus_gi());
}

// Data-field bit count of a PSDU: 16 service bits + payload + 6 tail bits.
inline std::int64_t psdu_bits(std::int64_t payload_bytes) {
  return 16 + 8 * payload_bytes + 6;
}

// On-air duration of a PPDU carrying payload_bytes on the given tones.
// Returns nullopt when the duration would exceed the PPDU cap; the caller
// must shrink the AMPDU.
inline std::optional<SimTime> ppdu_airtime(std::int64_t payload_bytes,
                                           int tones,
                                           const AirtimeBudget& budget,
                                           const McsParams& mcs) {
  TIWIFI_CHECK(payload_bytes >= 0, "negative payload");
  TIWIFI_CHECK(tones > 0, "ppdu_airtime requires a positive tone count");
  const std::int64_t bits_per_symbol_num =
      static_cast<std::int64_t>(tones) * mcs.bits_per_subcarrier *
      mcs.coding_num;
  const std::int64_t scaled_bits = psdu_bits(payload_bytes) * mcs.coding_den;
  const std::int64_t n_symbols =
      (scaled_bits + bits_per_symbol_num - 1) / bits_per_symbol_num;
  const SimTime airtime = budget.preamble + n_symbols * mcs.symbol_plus_gi();
  if (airtime > budget.max_ppdu_duration) {
    return std::nullopt;
  }
  return airtime;
}

// Largest number of equal-size MPDUs whose aggregate airtime fits inside
// the given total duration. Returns 0 when even a single MPDU does not fit.
inline int max_mpdus_for_duration(std::int64_t mpdu_on_air_bytes, int tones,
                                  SimTime duration,
                                  const AirtimeBudget& budget,
                                  const McsParams& mcs) {
  TIWIFI_CHECK(mpdu_on_air_bytes > 0, "MPDU on-air size must be positive");
  TIWIFI_CHECK(tones > 0, "mpdu packing requires a positive tone count");
  const SimTime sym = mcs.symbol_plus_gi();
  if (duration < budget.preamble + sym) {
    return 0;
  }
  const std::int64_t max_symbols = (duration - budget.preamble) / sym;
  const std::int64_t bits_per_symbol_num =
      static_cast<std::int64_t>(tones) * mcs.bits_per_subcarrier *
      mcs.coding_num;
  // ceil(den*(8kB+22)/num_bits) <= S  <=>  k <= (S*num_bits - 22*den)/(8B*den)
  const std::int64_t numerator =
      max_symbols * bits_per_symbol_num - 22 * mcs.coding_den;
  if (numerator < 0) {
    return 0;
  }
  const std::int64_t k = numerator / (8 * mpdu_on_air_bytes * mcs.coding_den);
  return static_cast<int>(k);
}

// Aggregation bound from the PPDU duration cap.
inline int max_ampdu_mpdus(std::int64_t mpdu_on_air_bytes, int tones,
                           const AirtimeBudget& budget, const McsParams& mcs) {
  return max_mpdus_for_duration(mpdu_on_air_bytes, tones,
                                budget.max_ppdu_duration, budget, mcs);
}

struct PhyParams {
  McsParams mcs;
  TonePlan tones;
  AirtimeBudget budget;

  // Tone count for an OFDMA group: 1 member -> full band, 2 -> halves,
  // 3 or 4 -> quarters (a partial group of 3 leaves one RU unused).
  int tones_for_group(int members) const {
    TIWIFI_CHECK(members >= 1 && members <= 4, "group size out of range");
    if (members == 1) return tones.data_tones_full;
    if (members == 2) return tones.data_tones_half;
    return tones.data_tones_quarter;
  }
};

}  // namespace tiwifi

#endif
