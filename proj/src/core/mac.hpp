#ifndef TIWIFI_MAC_HPP
#define TIWIFI_MAC_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "event_engine.hpp"
#include "mpdu.hpp"
#include "ofdma.hpp"
#include "phy.hpp"
#include "rng.hpp"
#include "sim_time.hpp"
#include "tx_queue.hpp"

namespace tiwifi {

struct MacParams {
  int cw_min = 3;
  int cw_max = 7;
  int retry_limit = 7;
  SimTime slot = us(9);
  SimTime aifs = us(34);
  std::int64_t mpdu_overhead_bytes = 44;  // MAC header 40 + delimiter 4
  std::int64_t mpdu_payload_bytes = 2500;
  // Application sampling period; the AP extrapolates stale buffer status
  // reports forward at this rate when sizing UL grants.
  SimTime sampling_period = ms(1);
  // Once the AP holds the medium it keeps scheduling DL+UL rounds until
  // this much time has elapsed (a started round always completes).
  SimTime txop_budget = us(5400);
  // Maximum time a nobus MPDU may wait before its first attempt; checked on
  // every bind. One sampling period by construction; 0 disables the check.
  SimTime nobus_queue_wait_cap = ms(1);

  std::int64_t mpdu_on_air_bytes() const {
    return mpdu_payload_bytes + mpdu_overhead_bytes;
  }
};

// Receives MAC outcomes; implemented by the metrics/display layer.
class MacObserver {
 public:
  virtual ~MacObserver() = default;
  virtual void on_mpdu_delivered(const Mpdu& mpdu, SimTime rx_time) = 0;
  virtual void on_retry_drop(const Mpdu& mpdu, SimTime now) = 0;
  virtual void on_proactive_drop(const Mpdu& mpdu, SimTime now) = 0;
  virtual void on_ampdu_transmitted(Direction dir, int n_mpdus,
                                    SimTime at) = 0;
  // Fired for every MPDU entering a transmission, at the PPDU start.
  virtual void on_mpdu_bound(const Mpdu& mpdu, SimTime at) {
    (void)mpdu;
    (void)at;
  }
};

class MacSystem;

enum class ContentionPhase { Idle, Waiting, Frozen, Resolving, Transmitting };

// Shared EDCA machinery for AP and STAs: one AC_VO contender per device.
class MacDevice {
 public:
  MacDevice(MacSystem& sys, DeviceId id, Discipline discipline);
  virtual ~MacDevice() = default;

  DeviceId id() const { return id_; }
  TxQueue& queue() { return queue_; }
  const TxQueue& tx_queue() const { return queue_; }
  int cw() const { return cw_; }

  // Entry point for freshly generated application messages.
  void enqueue_from_traffic(Mpdu mpdu);

  virtual bool has_content() const { return !queue_.empty(); }

  // This device alone reached the slot boundary: start its frame exchange
  // and return the time the medium stays seized.
  virtual SimTime begin_win_exchange() = 0;
  // The attempt collided: account retries/drops on what would have been the
  // first PPDU and return its airtime (the medium is burned that long).
  virtual SimTime collision_burn() = 0;
  // Called at the end of a won exchange, before contention resumes.
  virtual void finish_win_exchange() {}

 protected:
  std::vector<Mpdu> bind_checked(DeviceId dst, int max_mpdus,
                                 SimTime snapshot_at);
  std::int64_t ampdu_on_air_bytes(const std::vector<Mpdu>& mpdus) const;
  void apply_collision_outcome(const CollisionReport& report);
  void escalate_cw();
  void reset_cw();

  MacSystem& sys_;
  DeviceId id_;
  TxQueue queue_;

 private:
  friend class MacSystem;
  ContentionPhase phase_ = ContentionPhase::Idle;
  int cw_;
  int counter_ = -1;
  SimTime anchor_ = 0;
  EventHandle attempt_;
  RngStream rng_;
};

class ApDevice;

// Station MAC: single-user EDCA transmissions to the AP plus scheduled
// UL-OFDMA participation.
class StaDevice : public MacDevice {
 public:
  StaDevice(MacSystem& sys, DeviceId id, Discipline discipline)
      : MacDevice(sys, id, discipline) {}

  SimTime begin_win_exchange() override;
  SimTime collision_burn() override;

  // Builds this STA's uplink AMPDU for a trigger grant. Empty when the grant
  // was stale and nothing eligible is queued.
  Ampdu bind_for_trigger(int tones, SimTime grant_duration,
                         SimTime snapshot_at);
};

// Access point MAC: contends with the same EDCA parameters as the STAs and,
// on winning, runs one full DL-OFDMA pass followed by one UL-OFDMA round.
class ApDevice : public MacDevice {
 public:
  ApDevice(MacSystem& sys, Discipline discipline)
      : MacDevice(sys, kApId, discipline) {}

  // The AP contends whenever it holds DL data or believes a STA does.
  bool has_content() const override;

  SimTime begin_win_exchange() override;
  SimTime collision_burn() override;

  void update_bsr(DeviceId sta, int occupancy, SimTime reported_at) {
    bsr_.update(sta, occupancy, reported_at);
  }
  const BsrTable& bsr() const { return bsr_; }

 private:
  struct ExchangePlan {
    bool is_ul = false;
    ScheduleGroup group;
    int tones = 0;
    std::vector<int> planned_counts;
    SimTime start = 0;     // PPDU start (DL) or trigger start (UL)
    SimTime ppdu_dur = 0;  // data PPDU duration; the grant duration for UL
    SimTime end = 0;       // exchange end, after the Block Ack
    SimTime snapshot = 0;  // round snapshot governing eligibility
  };

  std::map<DeviceId, int> dl_occupancies() const;
  std::map<DeviceId, int> ul_occupancies() const;
  ExchangePlan plan_exchange(bool is_ul, const ScheduleGroup& group,
                             SimTime start, SimTime snapshot) const;

  // Plans one scheduling round (full DL pass, then one UL round) from a
  // fresh snapshot. Returns the round end, or start when nothing is
  // eligible.
  SimTime plan_round(SimTime start);
  void on_round_boundary();

  void on_dl_ppdu_start(std::size_t idx);
  void on_dl_ppdu_end(std::size_t idx);
  void on_ul_ppdu_start(std::size_t idx);
  void on_ul_ppdu_end(std::size_t idx);

  BsrTable bsr_;
  std::vector<ExchangePlan> exchanges_;
  std::vector<Ampdu> in_air_;
  SimTime txop_started_ = 0;
};

// The shared ideal medium plus the contention coordinator. Zero propagation
// delay and perfect sensing: transmissions fail if and only if two backoff
// expiries land on the same instant.
class MacSystem {
 public:
  MacSystem(Engine& engine, const PhyParams& phy, const MacParams& mac,
            MacObserver& observer, std::uint64_t seed);

  StaDevice* add_sta(Discipline discipline);
  ApDevice* make_ap(Discipline discipline);

  Engine& engine() { return engine_; }
  const PhyParams& phy() const { return phy_; }
  const MacParams& mac() const { return mac_; }
  MacObserver& observer() { return observer_; }
  ApDevice* ap() { return ap_; }
  std::uint64_t seed() const { return seed_; }

  MacDevice* device(DeviceId id) { return devices_[id].get(); }
  StaDevice* sta(DeviceId id);
  int device_count() const { return static_cast<int>(devices_.size()); }

  bool medium_idle() const { return !busy_; }
  SimTime busy_until() const { return busy_until_; }

  // Called by devices when they may need to (re)join contention.
  void offer_contention(MacDevice* dev);
  // The current holder keeps the medium longer (TXOP extension).
  void extend_seizure(SimTime new_until);
  // Success bookkeeping for a STA served inside the AP's TXOP.
  void note_external_service(StaDevice* dev);
  // Delivery fan-out for uplink frames (updates the AP's BSR table).
  void deliver_ul_ampdu(const Ampdu& ampdu, SimTime tx_start, SimTime rx_time);

  // Saturated-contention statistics for the collision oracle.
  std::int64_t attempts_total() const { return attempts_total_; }
  std::int64_t attempts_collided() const { return attempts_collided_; }
  std::int64_t busy_time() const { return busy_ns_; }

  // Sum of queued plus in-flight MPDUs over all devices.
  std::int64_t residual_mpdus() const;

 private:
  friend class MacDevice;
  friend class StaDevice;
  friend class ApDevice;

  void schedule_attempt(MacDevice* dev);
  void on_attempt_expired(MacDevice* dev);
  void resolve_attempts();
  void freeze_waiting(SimTime busy_start);
  void seize_medium(SimTime until);
  void on_medium_released();

  Engine& engine_;
  PhyParams phy_;
  MacParams mac_;
  MacObserver& observer_;
  std::uint64_t seed_;

  std::vector<std::unique_ptr<MacDevice>> devices_;
  ApDevice* ap_ = nullptr;

  bool busy_ = false;
  SimTime busy_until_ = 0;
  EventHandle tx_end_;
  std::vector<MacDevice*> pending_attempts_;
  bool resolve_scheduled_ = false;
  std::vector<MacDevice*> active_transmitters_;

  std::int64_t attempts_total_ = 0;
  std::int64_t attempts_collided_ = 0;
  std::int64_t busy_ns_ = 0;
};

}  // namespace tiwifi

#endif
