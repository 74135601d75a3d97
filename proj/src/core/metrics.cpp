#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "error.hpp"
#include "playback.hpp"

namespace tiwifi {

const char* sample_outcome_name(SampleOutcome o) {
  switch (o) {
    case SampleOutcome::Pending:
      return "residual";
    case SampleOutcome::Delivered:
      return "delivered";
    case SampleOutcome::RetryDrop:
      return "retry_drop";
    case SampleOutcome::ProactiveDrop:
      return "proactive_drop";
  }
  return "?";
}

MetricsCollector::MetricsCollector(SimTime warmup, SimTime sampling_period)
    : warmup_(warmup), sampling_period_(sampling_period) {}

int MetricsCollector::add_flow(Direction dir, DeviceId sta,
                               const SensorTrace* source,
                               std::int64_t duration_ticks) {
  FlowState fs;
  fs.dir = dir;
  fs.sta = sta;
  fs.source = source;
  fs.samples.resize(duration_ticks);
  fs.displayed_per_tick.resize(duration_ticks, Position{0.0, 0.0, 0.0});
  flows_.push_back(std::move(fs));
  return static_cast<int>(flows_.size()) - 1;
}

MetricsCollector::FlowState& MetricsCollector::flow_of(const Mpdu& mpdu) {
  TIWIFI_CHECK(mpdu.flow >= 0 &&
                   mpdu.flow < static_cast<int>(flows_.size()),
               "MPDU carries an unknown flow id");
  return flows_[mpdu.flow];
}

void MetricsCollector::record_generated(int flow, const Mpdu& mpdu) {
  FlowState& fs = flows_[flow];
  TIWIFI_CHECK(mpdu.seq >= 0 &&
                   mpdu.seq < static_cast<std::int64_t>(fs.samples.size()),
               "sample seq out of range");
  SampleRecord& rec = fs.samples[mpdu.seq];
  rec.generated_at = mpdu.generated_at;
  rec.enqueued_at = mpdu.generated_at;
  ++fs.generated;
}

void MetricsCollector::finalize_sample(const Mpdu& mpdu, SampleOutcome outcome,
                                       SimTime rx_time) {
  FlowState& fs = flow_of(mpdu);
  SampleRecord& rec = fs.samples[mpdu.seq];
  TIWIFI_CHECK(rec.outcome == SampleOutcome::Pending,
               "sample resolved twice");
  rec.outcome = outcome;
  rec.enqueued_at = mpdu.enqueued_at;
  rec.first_attempt_at = mpdu.first_attempt_at;
  rec.received_at = outcome == SampleOutcome::Delivered ? rx_time : -1;
}

void MetricsCollector::on_mpdu_delivered(const Mpdu& mpdu, SimTime rx_time) {
  finalize_sample(mpdu, SampleOutcome::Delivered, rx_time);
  FlowState& fs = flow_of(mpdu);
  ++fs.delivered;
  if (mpdu.generated_at >= warmup_) {
    const SimTime latency = rx_time - mpdu.enqueued_at;
    if (fs.dir == Direction::Downlink) {
      latencies_dl_.push_back(latency);
    } else {
      latencies_ul_.push_back(latency);
    }
  }
}

void MetricsCollector::on_retry_drop(const Mpdu& mpdu, SimTime now) {
  finalize_sample(mpdu, SampleOutcome::RetryDrop, now);
  ++flow_of(mpdu).retry_drops;
}

void MetricsCollector::on_proactive_drop(const Mpdu& mpdu, SimTime now) {
  finalize_sample(mpdu, SampleOutcome::ProactiveDrop, now);
  ++flow_of(mpdu).proactive_drops;
}

void MetricsCollector::on_ampdu_transmitted(Direction dir, int n_mpdus,
                                            SimTime at) {
  (void)at;
  if (dir == Direction::Downlink) {
    ++ampdu_count_dl_;
    ampdu_mpdus_dl_ += n_mpdus;
  } else {
    ++ampdu_count_ul_;
    ampdu_mpdus_ul_ += n_mpdus;
  }
}

void MetricsCollector::record_displayed(int flow, std::int64_t seq,
                                        SimTime at) {
  FlowState& fs = flows_[flow];
  if (seq >= 0 && seq < static_cast<std::int64_t>(fs.samples.size())) {
    SampleRecord& rec = fs.samples[seq];
    if (rec.displayed_at < 0) {
      rec.displayed_at = at;
    }
  }
}

void MetricsCollector::record_tick_value(int flow, std::int64_t tick,
                                         const Position& value) {
  FlowState& fs = flows_[flow];
  if (tick >= 0 && tick < static_cast<std::int64_t>(fs.displayed_per_tick.size())) {
    fs.displayed_per_tick[tick] = value;
  }
}

LatencySummary summarize_latencies(std::vector<SimTime> values) {
  LatencySummary s;
  s.count = static_cast<std::int64_t>(values.size());
  if (values.empty()) {
    return s;
  }
  std::sort(values.begin(), values.end());
  auto pct = [&](double p) {
    const auto idx = static_cast<std::size_t>(
        p * static_cast<double>(values.size() - 1) + 0.5);
    return values[std::min(idx, values.size() - 1)];
  };
  s.worst = values.back();
  s.p50 = pct(0.50);
  s.p95 = pct(0.95);
  s.p99 = pct(0.99);
  double sum = 0.0;
  for (SimTime v : values) sum += static_cast<double>(v);
  s.mean = sum / static_cast<double>(values.size());
  return s;
}

RunMetrics MetricsCollector::summarize(
    const std::vector<std::int64_t>& residual_per_flow, const MacSystem& mac,
    SimTime run_duration) const {
  TIWIFI_CHECK(residual_per_flow.size() == flows_.size(),
               "residual vector does not match the flow table");
  RunMetrics m;
  m.duration = run_duration;
  m.warmup = warmup_;

  const std::int64_t warmup_ticks =
      sampling_period_ > 0 ? warmup_ / sampling_period_ : 0;

  int dl_flows = 0, ul_flows = 0;
  for (std::size_t f = 0; f < flows_.size(); ++f) {
    const FlowState& fs = flows_[f];
    // Per-flow sample conservation; holds at every run end.
    TIWIFI_CHECK(fs.generated == fs.delivered + fs.retry_drops +
                                     fs.proactive_drops + residual_per_flow[f],
                 "per-flow sample conservation failed");
    const bool dl = fs.dir == Direction::Downlink;
    (dl ? m.generated_dl : m.generated_ul) += fs.generated;
    (dl ? m.delivered_dl : m.delivered_ul) += fs.delivered;
    (dl ? m.retry_drops_dl : m.retry_drops_ul) += fs.retry_drops;
    (dl ? m.proactive_drops_dl : m.proactive_drops_ul) += fs.proactive_drops;
    (dl ? m.residual_dl : m.residual_ul) += residual_per_flow[f];

    for (const SampleRecord& rec : fs.samples) {
      if (rec.first_attempt_at >= 0 && rec.enqueued_at >= 0) {
        m.max_first_attempt_wait = std::max(
            m.max_first_attempt_wait, rec.first_attempt_at - rec.enqueued_at);
      }
    }

    if (fs.source != nullptr) {
      const Position err =
          rmse(*fs.source, fs.displayed_per_tick, warmup_ticks);
      Position& acc = dl ? m.rmse_dl_cm : m.rmse_ul_cm;
      for (int axis = 0; axis < 3; ++axis) acc[axis] += err[axis];
      (dl ? dl_flows : ul_flows)++;
    }
  }
  for (int axis = 0; axis < 3; ++axis) {
    if (dl_flows > 0) m.rmse_dl_cm[axis] /= dl_flows;
    if (ul_flows > 0) m.rmse_ul_cm[axis] /= ul_flows;
  }
  m.rmse_cm = m.rmse_dl_cm[0];

  m.latency_dl = summarize_latencies(latencies_dl_);
  m.latency_ul = summarize_latencies(latencies_ul_);

  m.ampdu_count_dl = ampdu_count_dl_;
  m.ampdu_count_ul = ampdu_count_ul_;
  m.mean_ampdu_dl =
      ampdu_count_dl_ > 0
          ? static_cast<double>(ampdu_mpdus_dl_) / ampdu_count_dl_
          : 0.0;
  m.mean_ampdu_ul =
      ampdu_count_ul_ > 0
          ? static_cast<double>(ampdu_mpdus_ul_) / ampdu_count_ul_
          : 0.0;

  m.delivered_fraction_dl =
      m.generated_dl > 0
          ? static_cast<double>(m.delivered_dl) / m.generated_dl
          : 0.0;
  m.delivered_fraction_ul =
      m.generated_ul > 0
          ? static_cast<double>(m.delivered_ul) / m.generated_ul
          : 0.0;

  m.attempts = mac.attempts_total();
  m.attempts_collided = mac.attempts_collided();
  m.collision_probability =
      m.attempts > 0 ? static_cast<double>(m.attempts_collided) / m.attempts
                     : 0.0;
  m.medium_busy = mac.busy_time();
  return m;
}

void MetricsCollector::write_event_log_csv(std::ostream& out) const {
  out << "flow,seq,generated_at,enqueued_at,received_at,displayed_at,outcome\n";
  for (std::size_t f = 0; f < flows_.size(); ++f) {
    const FlowState& fs = flows_[f];
    const char* prefix = fs.dir == Direction::Downlink ? "dl" : "ul";
    for (std::size_t seq = 0; seq < fs.samples.size(); ++seq) {
      const SampleRecord& rec = fs.samples[seq];
      if (rec.generated_at < 0) {
        continue;  // never generated (run ended first)
      }
      out << prefix << fs.sta << ',' << seq << ',' << rec.generated_at << ','
          << rec.enqueued_at << ',' << rec.received_at << ','
          << rec.displayed_at << ',' << sample_outcome_name(rec.outcome)
          << '\n';
    }
  }
}

void write_run_summary_csv(const RunMetrics& m, std::ostream& out) {
  out << "key,value\n";
  out << "sta_count," << m.sta_count << '\n';
  out << "discipline," << discipline_name(m.discipline) << '\n';
  out << "seed," << m.seed << '\n';
  out << "duration_ns," << m.duration << '\n';
  out << "warmup_ns," << m.warmup << '\n';
  out << "worst_dl_ms," << to_ms(m.latency_dl.worst) << '\n';
  out << "worst_ul_ms," << to_ms(m.latency_ul.worst) << '\n';
  out << "worst_rtt_ms," << to_ms(m.worst_rtt()) << '\n';
  out << "p50_dl_ms," << to_ms(m.latency_dl.p50) << '\n';
  out << "p99_dl_ms," << to_ms(m.latency_dl.p99) << '\n';
  out << "p50_ul_ms," << to_ms(m.latency_ul.p50) << '\n';
  out << "p99_ul_ms," << to_ms(m.latency_ul.p99) << '\n';
  out << "mean_ampdu_dl," << m.mean_ampdu_dl << '\n';
  out << "mean_ampdu_ul," << m.mean_ampdu_ul << '\n';
  out << "generated_dl," << m.generated_dl << '\n';
  out << "generated_ul," << m.generated_ul << '\n';
  out << "delivered_dl," << m.delivered_dl << '\n';
  out << "delivered_ul," << m.delivered_ul << '\n';
  out << "retry_drops_dl," << m.retry_drops_dl << '\n';
  out << "retry_drops_ul," << m.retry_drops_ul << '\n';
  out << "proactive_drops_dl," << m.proactive_drops_dl << '\n';
  out << "proactive_drops_ul," << m.proactive_drops_ul << '\n';
  out << "residual_dl," << m.residual_dl << '\n';
  out << "residual_ul," << m.residual_ul << '\n';
  out << "delivered_fraction_dl," << m.delivered_fraction_dl << '\n';
  out << "delivered_fraction_ul," << m.delivered_fraction_ul << '\n';
  out << "rmse_cm," << m.rmse_cm << '\n';
  out << "rmse_dl_x_cm," << m.rmse_dl_cm[0] << '\n';
  out << "rmse_dl_y_cm," << m.rmse_dl_cm[1] << '\n';
  out << "rmse_dl_z_cm," << m.rmse_dl_cm[2] << '\n';
  out << "rmse_ul_x_cm," << m.rmse_ul_cm[0] << '\n';
  out << "attempts," << m.attempts << '\n';
  out << "attempts_collided," << m.attempts_collided << '\n';
  out << "collision_probability," << m.collision_probability << '\n';
  out << "max_first_attempt_wait_ns," << m.max_first_attempt_wait << '\n';
  out << "medium_busy_ns," << m.medium_busy << '\n';
}

}  // namespace tiwifi
