#include "simulation.hpp"

#include "error.hpp"

namespace tiwifi {

namespace {

// Per-flow trace seed, independent of the queue discipline so vanilla and
// nobus runs with the same seed replay identical motion signals.
std::uint64_t trace_seed(std::uint64_t run_seed, int flow_id) {
  return run_seed ^ (0x9e3779b97f4a7c15ULL *
                     (static_cast<std::uint64_t>(flow_id) + 2));
}

}  // namespace

Simulation::Simulation(const ExperimentConfig& config, int sta_count,
                       Discipline discipline, std::uint64_t seed)
    : config_(config),
      sta_count_(sta_count),
      discipline_(discipline),
      seed_(seed) {
  TIWIFI_CHECK(sta_count_ >= 1, "topology needs at least one STA");
  config_.validate();

  engine_ = std::make_unique<Engine>();
  collector_ = std::make_unique<MetricsCollector>(config_.warmup(),
                                                  config_.sampling_period());
  mac_ = std::make_unique<MacSystem>(*engine_, config_.phy_params(),
                                     config_.mac_params(), *this, seed_);
  mac_->make_ap(discipline_);
  for (int k = 0; k < sta_count_; ++k) {
    mac_->add_sta(discipline_);
  }
  build_flows();
}

Simulation::~Simulation() = default;

void Simulation::build_flows() {
  const std::int64_t ticks = config_.duration_ticks();
  MotionParams motion;
  motion.components = config_.motion_components;
  motion.min_hz = config_.motion_min_hz;
  motion.max_hz = config_.motion_max_hz;
  motion.target_p99_cm = config_.motion_p99_cm;
  motion.max_abs_cm = config_.motion_max_cm;

  SensorTrace csv_trace;
  if (config_.trace_source == "csv") {
    csv_trace = load_trace_csv(config_.trace_csv);
    if (csv_trace.duration_ticks() < ticks) {
      throw ConfigError("trace file shorter than the run duration");
    }
  }

  flows_.reserve(static_cast<std::size_t>(sta_count_) * 2);
  for (int sta = 1; sta <= sta_count_; ++sta) {
    for (Direction dir : {Direction::Downlink, Direction::Uplink}) {
      FlowRuntime flow;
      flow.id = static_cast<int>(flows_.size());
      flow.dir = dir;
      flow.sta = sta;
      flow.stagger = static_cast<SimTime>(sta) * config_.stagger_ns;
      if (config_.trace_source == "csv") {
        flow.trace = csv_trace;
      } else {
        flow.trace = generate_trace(trace_seed(seed_, flow.id), ticks, motion);
      }
      if (discipline_ == Discipline::Nobus) {
        flow.display = std::make_unique<ZohDisplay>();
      } else {
        flow.display = std::make_unique<JitterBufferDisplay>();
      }
      flows_.push_back(std::move(flow));
    }
  }

  for (FlowRuntime& flow : flows_) {
    const int id = collector_->add_flow(flow.dir, flow.sta, &flow.trace,
                                        config_.duration_ticks());
    TIWIFI_CHECK(id == flow.id, "flow registration out of order");
    flow.display->set_displayed_hook(
        [this, fid = flow.id](std::int64_t seq, SimTime at) {
          collector_->record_displayed(fid, seq, at);
        });
    schedule_flow_events(flow);
  }
}

void Simulation::schedule_flow_events(FlowRuntime& flow) {
  const SimTime period = config_.sampling_period();
  // First sample; subsequent ones self-reschedule to keep the queue small.
  engine_->schedule(flow.stagger, EventKind::SampleGeneration, flow.id,
                    [this, &flow]() { generate_sample(flow, 0); });
  // Display clock, same 1 kHz grid; at equal times the generation event was
  // scheduled first and therefore dispatches first.
  engine_->schedule(
      flow.stagger, EventKind::DisplayTick, flow.id, [this, &flow]() {
        const Position value = flow.display->on_tick(0, engine_->now());
        collector_->record_tick_value(flow.id, 0, value);
        schedule_display_tick(flow, 1);
      });
  (void)period;
}

void Simulation::schedule_display_tick(FlowRuntime& flow, std::int64_t tick) {
  if (tick >= config_.duration_ticks()) {
    return;
  }
  const SimTime at = flow.stagger + tick * config_.sampling_period();
  engine_->schedule(at, EventKind::DisplayTick, flow.id,
                    [this, &flow, tick]() {
                      const Position value =
                          flow.display->on_tick(tick, engine_->now());
                      collector_->record_tick_value(flow.id, tick, value);
                      schedule_display_tick(flow, tick + 1);
                    });
}

void Simulation::generate_sample(FlowRuntime& flow, std::int64_t tick) {
  const SimTime now = engine_->now();
  Mpdu mpdu;
  mpdu.seq = tick;
  mpdu.flow = flow.id;
  mpdu.src = flow.dir == Direction::Downlink ? kApId : flow.sta;
  mpdu.dst = flow.dir == Direction::Downlink ? flow.sta : kApId;
  mpdu.generated_at = now;
  mpdu.enqueued_at = now;
  mpdu.payload_bytes = config_.payload_bytes();
  mpdu.sample = flow.trace.samples[tick];
  flow.highest_generated_seq = tick;
  collector_->record_generated(flow.id, mpdu);

  MacDevice* device =
      flow.dir == Direction::Downlink ? mac_->device(kApId) : mac_->sta(flow.sta);
  device->enqueue_from_traffic(std::move(mpdu));

  if (tick + 1 < config_.duration_ticks()) {
    engine_->schedule(now + config_.sampling_period(),
                      EventKind::SampleGeneration, flow.id,
                      [this, &flow, tick]() {
                        generate_sample(flow, tick + 1);
                      });
  }
}

RunMetrics Simulation::run() {
  mac_->offer_contention(mac_->device(kApId));
  engine_->run_until(config_.duration());

  std::vector<std::int64_t> residuals;
  residuals.reserve(flows_.size());
  for (const FlowRuntime& flow : flows_) {
    if (flow.dir == Direction::Downlink) {
      residuals.push_back(
          mac_->device(kApId)->tx_queue().residual_for(flow.sta));
    } else {
      residuals.push_back(mac_->sta(flow.sta)->tx_queue().residual_for(kApId));
    }
  }
  RunMetrics metrics =
      collector_->summarize(residuals, *mac_, config_.duration());
  metrics.sta_count = sta_count_;
  metrics.discipline = discipline_;
  metrics.seed = seed_;
  return metrics;
}

void Simulation::on_mpdu_delivered(const Mpdu& mpdu, SimTime rx_time) {
  collector_->on_mpdu_delivered(mpdu, rx_time);
  flows_[mpdu.flow].display->on_reception(mpdu, rx_time);
}

void Simulation::on_retry_drop(const Mpdu& mpdu, SimTime now) {
  collector_->on_retry_drop(mpdu, now);
}

void Simulation::on_proactive_drop(const Mpdu& mpdu, SimTime now) {
  collector_->on_proactive_drop(mpdu, now);
}

void Simulation::on_ampdu_transmitted(Direction dir, int n_mpdus, SimTime at) {
  collector_->on_ampdu_transmitted(dir, n_mpdus, at);
}

void Simulation::on_mpdu_bound(const Mpdu& mpdu, SimTime at) {
  (void)at;
  if (discipline_ == Discipline::Nobus) {
    // A transmitted MPDU must carry the newest sample of its flow.
    TIWIFI_CHECK(mpdu.seq == flows_[mpdu.flow].highest_generated_seq,
                 "nobus transmitted a stale sample");
  }
}

RunMetrics simulate_run(const ExperimentConfig& config, int sta_count,
                        Discipline discipline, std::uint64_t seed) {
  Simulation sim(config, sta_count, discipline, seed);
  return sim.run();
}

}  // namespace tiwifi
