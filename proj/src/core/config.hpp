#ifndef TIWIFI_CONFIG_HPP
#define TIWIFI_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mac.hpp"
#include "phy.hpp"
#include "sim_time.hpp"
#include "tx_queue.hpp"

namespace tiwifi {

// Full experiment description: topology sweep, traffic shape, and every
// overridable PHY/MAC constant. Parsed from a sectioned key/value file;
// unknown keys are rejected so typos cannot silently fall back to defaults.
struct ExperimentConfig {
  // [run]
  std::vector<int> sta_counts = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::vector<Discipline> disciplines = {Discipline::Vanilla,
                                         Discipline::Nobus};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::int64_t duration_ms = 10000;
  std::int64_t warmup_ms = 100;
  std::string out_dir = "out";

  // [traffic]
  std::int64_t per_sta_rate_bps = 20'000'000;
  std::int64_t sampling_hz = 1000;
  std::string trace_source = "synthetic";  // synthetic | csv
  std::string trace_csv;                   // used when trace_source = csv
  int motion_components = 5;
  double motion_min_hz = 0.1;
  double motion_max_hz = 4.0;
  double motion_p99_cm = 10.0;
  double motion_max_cm = 12.0;
  std::int64_t stagger_ns = 1000;  // per-device generation phase offset

  // [phy]
  int tones_full = 3920;
  int tones_half = 1960;
  int tones_quarter = 980;
  std::int64_t preamble_us = 48;
  std::int64_t back_us = 32;
  std::int64_t trigger_us = 48;
  std::int64_t max_ppdu_us = 5400;
  std::int64_t sifs_us = 16;
  std::int64_t slot_us = 9;
  std::int64_t aifs_us = 34;

  // [mac]
  int cw_min = 3;
  int cw_max = 7;
  int retry_limit = 7;
  std::int64_t mpdu_overhead_bytes = 44;
  std::int64_t txop_budget_us = 5400;

  // Derived quantities -----------------------------------------------------

  std::int64_t payload_bytes() const {
    return per_sta_rate_bps / (8 * sampling_hz);
  }
  SimTime sampling_period() const { return kSecond / sampling_hz; }
  SimTime duration() const { return duration_ms * kMillisecond; }
  SimTime warmup() const { return warmup_ms * kMillisecond; }
  std::int64_t duration_ticks() const {
    return duration_ms * sampling_hz / 1000;
  }

  PhyParams phy_params() const;
  MacParams mac_params() const;

  // Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

// Parses the sectioned key/value text. Throws ConfigError naming the line on
// any syntax error, unknown key, or malformed value.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Canonical serialization; parse(serialize(c)) == c and serialization is a
// fixed point, so effective configs can be dumped alongside results.
std::string serialize_config(const ExperimentConfig& config);

// Applies one "section.key=value" override.
void apply_override(ExperimentConfig& config, const std::string& assignment);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace tiwifi

#endif
