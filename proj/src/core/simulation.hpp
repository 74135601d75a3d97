#ifndef TIWIFI_SIMULATION_HPP
#define TIWIFI_SIMULATION_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "config.hpp"
#include "event_engine.hpp"
#include "mac.hpp"
#include "metrics.hpp"
#include "playback.hpp"
#include "trace.hpp"

namespace tiwifi {

// One WiFi-7 BSS carrying bidirectional 1 kHz Tactile Internet flows: the AP
// bridges an operator per teleoperator STA. Deterministic in (config, seed).
class Simulation : public MacObserver {
 public:
  Simulation(const ExperimentConfig& config, int sta_count,
             Discipline discipline, std::uint64_t seed);
  ~Simulation() override;

  RunMetrics run();

  const MetricsCollector& collector() const { return *collector_; }
  const MacSystem& mac_system() const { return *mac_; }
  Engine& engine() { return *engine_; }

 private:
  struct FlowRuntime {
    int id = 0;
    Direction dir = Direction::Downlink;
    DeviceId sta = 0;
    SimTime stagger = 0;
    SensorTrace trace;
    std::unique_ptr<Display> display;
    std::int64_t highest_generated_seq = -1;
  };

  void build_flows();
  void schedule_flow_events(FlowRuntime& flow);
  void schedule_display_tick(FlowRuntime& flow, std::int64_t tick);
  void generate_sample(FlowRuntime& flow, std::int64_t tick);

  // MacObserver
  void on_mpdu_delivered(const Mpdu& mpdu, SimTime rx_time) override;
  void on_retry_drop(const Mpdu& mpdu, SimTime now) override;
  void on_proactive_drop(const Mpdu& mpdu, SimTime now) override;
  void on_ampdu_transmitted(Direction dir, int n_mpdus, SimTime at) override;
  void on_mpdu_bound(const Mpdu& mpdu, SimTime at) override;

  ExperimentConfig config_;
  int sta_count_;
  Discipline discipline_;
  std::uint64_t seed_;

  std::unique_ptr<Engine> engine_;
  std::unique_ptr<MetricsCollector> collector_;
  std::unique_ptr<MacSystem> mac_;
  std::vector<FlowRuntime> flows_;
};

// Convenience wrapper: build, run, summarize.
RunMetrics simulate_run(const ExperimentConfig& config, int sta_count,
                        Discipline discipline, std::uint64_t seed);

}  // namespace tiwifi

#endif
