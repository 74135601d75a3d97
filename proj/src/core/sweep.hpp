#ifndef TIWIFI_SWEEP_HPP
#define TIWIFI_SWEEP_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "metrics.hpp"

namespace tiwifi {

// One completed (or failed) run of the sweep grid.
struct SweepRow {
  Discipline discipline = Discipline::Vanilla;
  int sta_count = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;  // failed runs are recorded, never dropped
  RunMetrics metrics;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (discipline, sta_count, seed)
};

// Aggregate over seeds for one (discipline, sta_count) grid point:
// max for worst-case latencies, mean for everything else.
struct SweepAggregate {
  Discipline discipline = Discipline::Vanilla;
  int sta_count = 0;
  int seed_runs = 0;
  double worst_dl_ms = 0.0;
  double worst_ul_ms = 0.0;
  double worst_rtt_ms = 0.0;
  double mean_ampdu_dl = 0.0;
  double mean_ampdu_ul = 0.0;
  double delivered_fraction_dl = 0.0;
  double delivered_fraction_ul = 0.0;
  double rmse_cm = 0.0;
  double collision_probability = 0.0;
};

using ProgressFn = std::function<void(const SweepRow&)>;

// Executes |sta_counts| x |disciplines| x |seeds| independent runs, each
// deterministic in (config, seed). Run failures are captured per row.
SweepResult run_sweep(const ExperimentConfig& config,
                      const ProgressFn& progress = nullptr);

std::vector<SweepAggregate> aggregate_sweep(const SweepResult& sweep);

void write_sweep_raw_csv(const SweepResult& sweep, std::ostream& out);
void write_sweep_agg_csv(const SweepResult& sweep, std::ostream& out);

// Reads a sweep_raw.csv written by write_sweep_raw_csv.
SweepResult load_sweep_raw_csv(const std::string& path);

// Plot-ready tables.
//   latency_ampdu: sta_count, discipline, worst_dl_ms, worst_ul_ms,
//                  worst_rtt_ms, mean_ampdu_dl, mean_ampdu_ul
//   rmse_fraction: sta_count, discipline, delivered_fraction, rmse_cm
void emit_plotdata(const SweepResult& sweep, const std::string& kind,
                   std::ostream& out);

}  // namespace tiwifi

#endif
