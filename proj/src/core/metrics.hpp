#ifndef TIWIFI_METRICS_HPP
#define TIWIFI_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mac.hpp"
#include "mpdu.hpp"
#include "sim_time.hpp"
#include "trace.hpp"
#include "tx_queue.hpp"

namespace tiwifi {

enum class SampleOutcome : std::uint8_t {
  Pending,        // still queued or in flight at run end
  Delivered,
  RetryDrop,      // exceeded the retransmission limit
  ProactiveDrop,  // displaced by a newer sample (nobus)
};

const char* sample_outcome_name(SampleOutcome o);

struct SampleRecord {
  SimTime generated_at = -1;
  SimTime enqueued_at = -1;
  SimTime first_attempt_at = -1;
  SimTime received_at = -1;
  SimTime displayed_at = -1;
  SampleOutcome outcome = SampleOutcome::Pending;
};

struct LatencySummary {
  SimTime worst = 0;
  SimTime p50 = 0;
  SimTime p95 = 0;
  SimTime p99 = 0;
  double mean = 0.0;
  std::int64_t count = 0;
};

// Everything a single run reports.
struct RunMetrics {
  int sta_count = 0;
  Discipline discipline = Discipline::Vanilla;
  std::uint64_t seed = 0;
  SimTime duration = 0;
  SimTime warmup = 0;

  LatencySummary latency_dl;  // enqueue -> reception, nanoseconds
  LatencySummary latency_ul;
  SimTime worst_rtt() const { return latency_dl.worst + latency_ul.worst; }

  double mean_ampdu_dl = 0.0;
  double mean_ampdu_ul = 0.0;
  std::int64_t ampdu_count_dl = 0;
  std::int64_t ampdu_count_ul = 0;

  std::int64_t generated_dl = 0, generated_ul = 0;
  std::int64_t delivered_dl = 0, delivered_ul = 0;
  std::int64_t retry_drops_dl = 0, retry_drops_ul = 0;
  std::int64_t proactive_drops_dl = 0, proactive_drops_ul = 0;
  std::int64_t residual_dl = 0, residual_ul = 0;

  double delivered_fraction_dl = 0.0;
  double delivered_fraction_ul = 0.0;

  Position rmse_dl_cm{0.0, 0.0, 0.0};  // mean over teleoperator displays
  Position rmse_ul_cm{0.0, 0.0, 0.0};  // mean over operator-side displays
  // The single-axis value the plots use (axis 0 of the DL mean).
  double rmse_cm = 0.0;

  std::int64_t attempts = 0;
  std::int64_t attempts_collided = 0;
  double collision_probability = 0.0;

  // Longest wait between enqueue and first transmission attempt observed on
  // any sample that reached the air.
  SimTime max_first_attempt_wait = 0;
  SimTime medium_busy = 0;
};

// Accumulates per-sample state during a run and reduces it to RunMetrics.
class MetricsCollector : public MacObserver {
 public:
  MetricsCollector(SimTime warmup, SimTime sampling_period);

  int add_flow(Direction dir, DeviceId sta, const SensorTrace* source,
               std::int64_t duration_ticks);

  void record_generated(int flow, const Mpdu& mpdu);
  void record_displayed(int flow, std::int64_t seq, SimTime at);
  void record_tick_value(int flow, std::int64_t tick, const Position& value);

  // MacObserver
  void on_mpdu_delivered(const Mpdu& mpdu, SimTime rx_time) override;
  void on_retry_drop(const Mpdu& mpdu, SimTime now) override;
  void on_proactive_drop(const Mpdu& mpdu, SimTime now) override;
  void on_ampdu_transmitted(Direction dir, int n_mpdus, SimTime at) override;

  // Verifies per-flow conservation against the queues' residuals and
  // reduces everything to a RunMetrics. residual_per_flow is indexed like
  // the flow ids returned by add_flow.
  RunMetrics summarize(const std::vector<std::int64_t>& residual_per_flow,
                       const MacSystem& mac, SimTime run_duration) const;

  void write_event_log_csv(std::ostream& out) const;

  const std::vector<Position>& displayed_values(int flow) const {
    return flows_[flow].displayed_per_tick;
  }

 private:
  struct FlowState {
    Direction dir;
    DeviceId sta;
    const SensorTrace* source;
    std::vector<SampleRecord> samples;
    std::vector<Position> displayed_per_tick;
    std::int64_t generated = 0;
    std::int64_t delivered = 0;
    std::int64_t retry_drops = 0;
    std::int64_t proactive_drops = 0;
  };

  FlowState& flow_of(const Mpdu& mpdu);
  void finalize_sample(const Mpdu& mpdu, SampleOutcome outcome,
                       SimTime rx_time);

  SimTime warmup_;
  SimTime sampling_period_;
  std::vector<FlowState> flows_;
  std::vector<SimTime> latencies_dl_;  // post-warmup
  std::vector<SimTime> latencies_ul_;
  std::int64_t ampdu_count_dl_ = 0, ampdu_mpdus_dl_ = 0;
  std::int64_t ampdu_count_ul_ = 0, ampdu_mpdus_ul_ = 0;
};

LatencySummary summarize_latencies(std::vector<SimTime> values);

void write_run_summary_csv(const RunMetrics& m, std::ostream& out);

}  // namespace tiwifi

#endif
