#include "mac.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "error.hpp"

namespace tiwifi {

// ---------------------------------------------------------------- MacDevice

MacDevice::MacDevice(MacSystem& sys, DeviceId id, Discipline discipline)
    : sys_(sys),
      id_(id),
      queue_(discipline),
      cw_(sys.mac().cw_min),
      rng_(sys.seed(), static_cast<std::uint64_t>(id)) {}

void MacDevice::enqueue_from_traffic(Mpdu mpdu) {
  const SimTime now = sys_.engine().now();
  mpdu.enqueued_at = now;
  EnqueueReport report = queue_.enqueue(std::move(mpdu));
  if (report.replaced) {
    sys_.observer().on_proactive_drop(*report.replaced, now);
  }
  sys_.offer_contention(this);
}

std::vector<Mpdu> MacDevice::bind_checked(DeviceId dst, int max_mpdus,
                                          SimTime snapshot_at) {
  const SimTime now = sys_.engine().now();
  std::vector<Mpdu> bound = queue_.bind(dst, max_mpdus, snapshot_at, now);
  const bool nobus = queue_.discipline() == Discipline::Nobus;
  for (const Mpdu& m : bound) {
    if (nobus && sys_.mac().nobus_queue_wait_cap > 0 &&
        m.first_attempt_at == now) {
      TIWIFI_CHECK(now - m.enqueued_at <= sys_.mac().nobus_queue_wait_cap,
                   "nobus MPDU waited longer than one sampling period");
    }
    sys_.observer().on_mpdu_bound(m, now);
  }
  return bound;
}

std::int64_t MacDevice::ampdu_on_air_bytes(
    const std::vector<Mpdu>& mpdus) const {
  std::int64_t total = 0;
  for (const Mpdu& m : mpdus) {
    total += m.payload_bytes + sys_.mac().mpdu_overhead_bytes;
  }
  return total;
}

void MacDevice::apply_collision_outcome(const CollisionReport& report) {
  const SimTime now = sys_.engine().now();
  for (const Mpdu& m : report.retry_dropped) {
    sys_.observer().on_retry_drop(m, now);
  }
  for (const Mpdu& m : report.proactive_dropped) {
    sys_.observer().on_proactive_drop(m, now);
  }
}

void MacDevice::escalate_cw() {
  cw_ = std::min(2 * (cw_ + 1) - 1, sys_.mac().cw_max);
}

void MacDevice::reset_cw() { cw_ = sys_.mac().cw_min; }

// ---------------------------------------------------------------- StaDevice

SimTime StaDevice::begin_win_exchange() {
  const SimTime now = sys_.engine().now();
  const PhyParams& phy = sys_.phy();
  const int tones = phy.tones.data_tones_full;
  const int cap =
      max_ampdu_mpdus(sys_.mac().mpdu_on_air_bytes(), tones, phy.budget,
                      phy.mcs);
  TIWIFI_CHECK(cap >= 1, "a single MPDU does not fit the PPDU budget");

  Ampdu ampdu;
  ampdu.src = id_;
  ampdu.dst = kApId;
  ampdu.mpdus = bind_checked(kApId, cap, now);
  TIWIFI_CHECK(!ampdu.empty(), "attempt fired with an empty queue");
  // The piggybacked report announces what stays behind after this frame.
  ampdu.reported_occupancy = queue_.depth(kApId);

  const auto airtime =
      ppdu_airtime(ampdu_on_air_bytes(ampdu.mpdus), tones, phy.budget,
                   phy.mcs);
  TIWIFI_CHECK(airtime.has_value(), "bound AMPDU exceeds the PPDU cap");

  const SimTime ppdu_end = now + *airtime;
  const SimTime exchange_end =
      ppdu_end + phy.budget.sifs + phy.budget.back_duration;

  sys_.engine().schedule(
      ppdu_end, EventKind::TxPhase, id_, [this, ampdu, now, ppdu_end]() {
        queue_.on_bound_success(kApId);
        sys_.observer().on_ampdu_transmitted(Direction::Uplink, ampdu.size(),
                                             ppdu_end);
        sys_.deliver_ul_ampdu(ampdu, now, ppdu_end);
      });
  return exchange_end;
}

SimTime StaDevice::collision_burn() {
  const SimTime now = sys_.engine().now();
  const PhyParams& phy = sys_.phy();
  const int tones = phy.tones.data_tones_full;
  const int cap =
      max_ampdu_mpdus(sys_.mac().mpdu_on_air_bytes(), tones, phy.budget,
                      phy.mcs);
  std::vector<Mpdu> bound = bind_checked(kApId, cap, now);
  TIWIFI_CHECK(!bound.empty(), "collided attempt with an empty queue");
  const auto airtime =
      ppdu_airtime(ampdu_on_air_bytes(bound), tones, phy.budget, phy.mcs);
  TIWIFI_CHECK(airtime.has_value(), "bound AMPDU exceeds the PPDU cap");

  CollisionReport report =
      queue_.on_bound_collision(kApId, sys_.mac().retry_limit);
  apply_collision_outcome(report);
  if (report.survivor_requeued) {
    escalate_cw();
  } else {
    reset_cw();  // the pending transmission is gone; the next one is fresh
  }
  return *airtime;
}

Ampdu StaDevice::bind_for_trigger(int tones, SimTime grant_duration,
                                  SimTime snapshot_at) {
  const PhyParams& phy = sys_.phy();
  Ampdu ampdu;
  ampdu.src = id_;
  ampdu.dst = kApId;
  const int fit = max_mpdus_for_duration(sys_.mac().mpdu_on_air_bytes(), tones,
                                         grant_duration, phy.budget, phy.mcs);
  if (fit >= 1 && queue_.depth(kApId) > 0) {
    ampdu.mpdus = bind_checked(kApId, fit, snapshot_at);
  }
  ampdu.reported_occupancy = queue_.depth(kApId);
  return ampdu;
}

// ----------------------------------------------------------------- ApDevice

bool ApDevice::has_content() const {
  if (!queue_.empty()) {
    return true;
  }
  for (int id = 1; id < sys_.device_count(); ++id) {
    if (bsr_.occupancy(id) > 0) {
      return true;
    }
  }
  return false;
}

std::map<DeviceId, int> ApDevice::dl_occupancies() const {
  std::map<DeviceId, int> occ;
  for (DeviceId dst : queue_.backlogged()) {
    occ[dst] = queue_.depth(dst);
  }
  return occ;
}

std::map<DeviceId, int> ApDevice::ul_occupancies() const {
  // Reports carry the backlog left after the reporting frame; the traffic is
  // strictly periodic, so the AP projects each report forward at the
  // sampling rate. Never-heard STAs keep the flat default of one MPDU.
  const SimTime now = sys_.engine().now();
  const SimTime period = sys_.mac().sampling_period;
  const bool depth_one = queue_.discipline() == Discipline::Nobus;
  std::map<DeviceId, int> occ;
  for (int id = 1; id < sys_.device_count(); ++id) {
    int estimate = bsr_.occupancy(id);
    if (bsr_.heard_from(id) && period > 0) {
      const SimTime elapsed = now - bsr_.reported_at(id);
      estimate += static_cast<int>((elapsed + period - 1) / period);
    }
    if (depth_one) {
      estimate = std::min(estimate, 1);
    }
    if (estimate > 0) {
      occ[id] = estimate;
    }
  }
  return occ;
}

ApDevice::ExchangePlan ApDevice::plan_exchange(bool is_ul,
                                               const ScheduleGroup& group,
                                               SimTime start,
                                               SimTime snapshot) const {
  const PhyParams& phy = sys_.phy();
  ExchangePlan plan;
  plan.is_ul = is_ul;
  plan.group = group;
  plan.tones = phy.tones_for_group(group.size());
  plan.start = start;
  plan.snapshot = snapshot;

  const int cap = max_ampdu_mpdus(sys_.mac().mpdu_on_air_bytes(), plan.tones,
                                  phy.budget, phy.mcs);
  TIWIFI_CHECK(cap >= 1, "a single MPDU does not fit the PPDU budget");
  SimTime max_air = 0;
  for (int occ : group.occupancies) {
    const int count = std::min(occ, cap);
    plan.planned_counts.push_back(count);
    const auto air = ppdu_airtime(
        static_cast<std::int64_t>(count) * sys_.mac().mpdu_on_air_bytes(),
        plan.tones, phy.budget, phy.mcs);
    TIWIFI_CHECK(air.has_value(), "planned AMPDU exceeds the PPDU cap");
    max_air = std::max(max_air, *air);
  }
  plan.ppdu_dur = max_air;
  if (is_ul) {
    plan.end = start + phy.budget.trigger_duration + phy.budget.sifs +
               plan.ppdu_dur + phy.budget.sifs + phy.budget.back_duration;
  } else {
    plan.end = start + plan.ppdu_dur + phy.budget.sifs +
               phy.budget.back_duration;
  }
  return plan;
}

SimTime ApDevice::plan_round(SimTime start) {
  const AirtimeBudget& budget = sys_.phy().budget;
  const auto dl_groups = group_stas(dl_occupancies());
  const auto ul_groups = group_stas(ul_occupancies());
  if (dl_groups.empty() && ul_groups.empty()) {
    return start;
  }

  const std::size_t first = exchanges_.size();
  SimTime t = start;
  for (const auto& g : dl_groups) {
    if (exchanges_.size() > first) t += budget.sifs;
    exchanges_.push_back(plan_exchange(false, g, t, start));
    t = exchanges_.back().end;
  }
  for (const auto& g : ul_groups) {
    if (exchanges_.size() > first) t += budget.sifs;
    exchanges_.push_back(plan_exchange(true, g, t, start));
    t = exchanges_.back().end;
  }

  for (std::size_t i = first; i < exchanges_.size(); ++i) {
    const ExchangePlan& ex = exchanges_[i];
    if (ex.is_ul) {
      const SimTime ppdu_start =
          ex.start + budget.trigger_duration + budget.sifs;
      sys_.engine().schedule(ppdu_start, EventKind::TxPhase, id_,
                             [this, i]() { on_ul_ppdu_start(i); });
      sys_.engine().schedule(ppdu_start + ex.ppdu_dur, EventKind::TxPhase,
                             id_, [this, i]() { on_ul_ppdu_end(i); });
    } else {
      sys_.engine().schedule(ex.start, EventKind::TxPhase, id_,
                             [this, i]() { on_dl_ppdu_start(i); });
      sys_.engine().schedule(ex.start + ex.ppdu_dur, EventKind::TxPhase, id_,
                             [this, i]() { on_dl_ppdu_end(i); });
    }
  }

  // Medium-occupancy accounting: the round must tile exactly into exchange
  // durations plus the inter-exchange spaces.
  SimTime total = 0;
  for (std::size_t i = first; i < exchanges_.size(); ++i) {
    total += exchanges_[i].end - exchanges_[i].start;
  }
  total += static_cast<SimTime>(exchanges_.size() - first - 1) * budget.sifs;
  TIWIFI_CHECK(t - start == total, "TXOP round accounting mismatch");
  return t;
}

SimTime ApDevice::begin_win_exchange() {
  const SimTime now = sys_.engine().now();
  const AirtimeBudget& budget = sys_.phy().budget;
  txop_started_ = now;
  opener_failures_ = 0;
  exchanges_.clear();
  in_air_.clear();

  // Every AP access opens with a short control preface announcing the
  // multi-user sequence; data exchanges follow after a SIFS.
  const SimTime first_round = now + budget.trigger_duration + budget.sifs;
  const SimTime end = plan_round(first_round);
  TIWIFI_CHECK(end > first_round, "AP won contention without content");
  sys_.engine().schedule(end, EventKind::TxPhase, id_,
                         [this]() { on_round_boundary(); });
  return end;
}

// The access keeps scheduling rounds back to back until the TXOP budget is
// spent or a round moves no data; only then does the AP release the medium
// and re-contend.
void ApDevice::on_round_boundary() {
  const SimTime now = sys_.engine().now();
  if (round_mpdus_ == 0 || now - txop_started_ >= sys_.mac().txop_budget) {
    return;
  }
  round_mpdus_ = 0;
  const SimTime start = now + sys_.phy().budget.sifs;
  const SimTime end = plan_round(start);
  if (end == start) {
    return;  // nothing eligible, the pending release stands
  }
  // The boundary must outrank the rescheduled release at equal fire times.
  sys_.engine().schedule(end, EventKind::TxPhase, id_,
                         [this]() { on_round_boundary(); });
  sys_.extend_seizure(end);
}

void ApDevice::on_dl_ppdu_start(std::size_t idx) {
  const ExchangePlan& ex = exchanges_[idx];
  in_air_.clear();
  for (int m = 0; m < ex.group.size(); ++m) {
    Ampdu ampdu;
    ampdu.src = id_;
    ampdu.dst = ex.group.members[m];
    ampdu.mpdus =
        bind_checked(ampdu.dst, ex.planned_counts[m], ex.snapshot);
    TIWIFI_CHECK(!ampdu.empty(), "DL exchange planned for an empty queue");
    const auto air = ppdu_airtime(ampdu_on_air_bytes(ampdu.mpdus), ex.tones,
                                  sys_.phy().budget, sys_.phy().mcs);
    TIWIFI_CHECK(air.has_value() && *air <= ex.ppdu_dur,
                 "bound DL AMPDU exceeds its planned airtime");
    in_air_.push_back(std::move(ampdu));
  }
}

void ApDevice::on_dl_ppdu_end(std::size_t idx) {
  const SimTime now = sys_.engine().now();
  for (Ampdu& ampdu : in_air_) {
    queue_.on_bound_success(ampdu.dst);
    sys_.observer().on_ampdu_transmitted(Direction::Downlink, ampdu.size(),
                                         now);
    for (const Mpdu& m : ampdu.mpdus) {
      sys_.observer().on_mpdu_delivered(m, now);
    }
  }
  in_air_.clear();
  (void)idx;
}

void ApDevice::on_ul_ppdu_start(std::size_t idx) {
  const ExchangePlan& ex = exchanges_[idx];
  in_air_.clear();
  for (int m = 0; m < ex.group.size(); ++m) {
    StaDevice* sta = sys_.sta(ex.group.members[m]);
    in_air_.push_back(
        sta->bind_for_trigger(ex.tones, ex.ppdu_dur, ex.snapshot));
  }
}

void ApDevice::on_ul_ppdu_end(std::size_t idx) {
  const ExchangePlan& ex = exchanges_[idx];
  const SimTime now = sys_.engine().now();
  const SimTime tx_start = now - ex.ppdu_dur;
  for (Ampdu& ampdu : in_air_) {
    if (ampdu.empty()) {
      continue;  // stale grant, the RU carried only padding
    }
    StaDevice* sta = sys_.sta(ampdu.src);
    sta->queue().on_bound_success(kApId);
    sys_.observer().on_ampdu_transmitted(Direction::Uplink, ampdu.size(),
                                         now);
    sys_.deliver_ul_ampdu(ampdu, tx_start, now);
    sys_.note_external_service(sta);
  }
  in_air_.clear();
}

SimTime ApDevice::collision_burn() {
  const SimTime now = sys_.engine().now();
  const PhyParams& phy = sys_.phy();
  const auto dl_groups = group_stas(dl_occupancies());
  if (dl_groups.empty()) {
    // The trigger frame opening a UL-only TXOP is what collided.
    escalate_cw();
    return phy.budget.trigger_duration;
  }

  const ExchangePlan first = plan_exchange(false, dl_groups.front(), now, now);
  bool any_survivor = false;
  SimTime max_air = 0;
  for (int m = 0; m < first.group.size(); ++m) {
    const DeviceId dst = first.group.members[m];
    std::vector<Mpdu> bound =
        bind_checked(dst, first.planned_counts[m], now);
    TIWIFI_CHECK(!bound.empty(), "collided DL exchange with an empty queue");
    const auto air = ppdu_airtime(ampdu_on_air_bytes(bound), first.tones,
                                  phy.budget, phy.mcs);
    TIWIFI_CHECK(air.has_value(), "bound AMPDU exceeds the PPDU cap");
    max_air = std::max(max_air, *air);
    CollisionReport report =
        queue_.on_bound_collision(dst, sys_.mac().retry_limit);
    apply_collision_outcome(report);
    any_survivor = any_survivor || report.survivor_requeued;
  }
  if (any_survivor) {
    escalate_cw();
  } else {
    reset_cw();
  }
  return max_air;
}

// ----------------------------------------------------------------- MacSystem

MacSystem::MacSystem(Engine& engine, const PhyParams& phy,
                     const MacParams& mac, MacObserver& observer,
                     std::uint64_t seed)
    : engine_(engine), phy_(phy), mac_(mac), observer_(observer), seed_(seed) {
  devices_.resize(1);  // slot 0 reserved for the AP
}

StaDevice* MacSystem::add_sta(Discipline discipline) {
  const DeviceId id = static_cast<DeviceId>(devices_.size());
  auto dev = std::make_unique<StaDevice>(*this, id, discipline);
  StaDevice* raw = dev.get();
  devices_.push_back(std::move(dev));
  return raw;
}

ApDevice* MacSystem::make_ap(Discipline discipline) {
  TIWIFI_CHECK(ap_ == nullptr, "AP already created");
  auto dev = std::make_unique<ApDevice>(*this, discipline);
  ap_ = dev.get();
  devices_[kApId] = std::move(dev);
  return ap_;
}

StaDevice* MacSystem::sta(DeviceId id) {
  TIWIFI_CHECK(id > 0 && id < device_count(), "not a STA id");
  return static_cast<StaDevice*>(devices_[id].get());
}

void MacSystem::offer_contention(MacDevice* dev) {
  if (dev->phase_ != ContentionPhase::Idle || !dev->has_content()) {
    return;
  }
  if (dev->counter_ < 0) {
    TIWIFI_CHECK(dev->cw_ == mac_.cw_min || dev->cw_ == mac_.cw_max,
                 "contention window left its two admissible values");
    dev->counter_ =
        static_cast<int>(dev->rng_.uniform_int(0, dev->cw_));
  }
  if (busy_) {
    dev->phase_ = ContentionPhase::Frozen;
  } else {
    dev->phase_ = ContentionPhase::Waiting;
    schedule_attempt(dev);
  }
}

void MacSystem::schedule_attempt(MacDevice* dev) {
  dev->anchor_ = engine_.now();
  const SimTime fire =
      dev->anchor_ + mac_.aifs + static_cast<SimTime>(dev->counter_) *
                                     mac_.slot;
  dev->attempt_ = engine_.schedule(fire, EventKind::BackoffExpiry, dev->id(),
                                   [this, dev]() { on_attempt_expired(dev); });
}

void MacSystem::on_attempt_expired(MacDevice* dev) {
  TIWIFI_CHECK(dev->phase_ == ContentionPhase::Waiting,
               "attempt fired outside contention");
  dev->attempt_ = EventHandle{};
  dev->phase_ = ContentionPhase::Resolving;
  pending_attempts_.push_back(dev);
  if (!resolve_scheduled_) {
    resolve_scheduled_ = true;
    engine_.schedule(engine_.now(), EventKind::MediumResolve, -1,
                     [this]() { resolve_attempts(); });
  }
}

void MacSystem::resolve_attempts() {
  static const bool trace = std::getenv("TIWIFI_MAC_TRACE") != nullptr;
  resolve_scheduled_ = false;
  std::vector<MacDevice*> attempts;
  attempts.swap(pending_attempts_);
  TIWIFI_CHECK(!attempts.empty(), "medium resolve without attempts");
  const SimTime now = engine_.now();

  attempts_total_ += static_cast<std::int64_t>(attempts.size());
  freeze_waiting(now);

  active_transmitters_ = attempts;
  for (MacDevice* dev : attempts) {
    dev->phase_ = ContentionPhase::Transmitting;
    dev->counter_ = -1;
  }

  SimTime until = now;
  if (attempts.size() == 1) {
    until = attempts.front()->begin_win_exchange();
    if (trace) {
      std::fprintf(stderr, "%.6f win dev=%d until=%.6f\n", now / 1e9,
                   attempts.front()->id(), until / 1e9);
    }
  } else {
    attempts_collided_ += static_cast<std::int64_t>(attempts.size());
    for (MacDevice* dev : attempts) {
      until = std::max(until, now + dev->collision_burn());
    }
  }
  if (trace && attempts.size() > 1) {
    std::fprintf(stderr, "%.6f collision n=%zu devs=", now / 1e9,
                 attempts.size());
    for (auto* d : attempts) std::fprintf(stderr, "%d,", d->id());
    std::fprintf(stderr, " until=%.6f\n", until / 1e9);
  }
  TIWIFI_CHECK(until > now, "zero-length medium seizure");
  seize_medium(until);
}

void MacSystem::freeze_waiting(SimTime busy_start) {
  for (auto& dev : devices_) {
    if (!dev || dev->phase_ != ContentionPhase::Waiting) {
      continue;
    }
    engine_.cancel(dev->attempt_);
    const SimTime aifs_end = dev->anchor_ + mac_.aifs;
    int elapsed = 0;
    if (busy_start > aifs_end) {
      elapsed = static_cast<int>((busy_start - aifs_end) / mac_.slot);
    }
    dev->counter_ -= elapsed;
    TIWIFI_CHECK(dev->counter_ >= (busy_start >= aifs_end ? 1 : 0),
                 "frozen backoff counter underflowed");
    dev->phase_ = ContentionPhase::Frozen;
  }
}

void MacSystem::seize_medium(SimTime until) {
  busy_ = true;
  busy_until_ = until;
  busy_ns_ += until - engine_.now();
  tx_end_ = engine_.schedule(until, EventKind::TxEnd, -1,
                             [this]() { on_medium_released(); });
}

void MacSystem::extend_seizure(SimTime new_until) {
  TIWIFI_CHECK(busy_ && new_until > busy_until_,
               "medium extension without a seizure in progress");
  busy_ns_ += new_until - busy_until_;
  busy_until_ = new_until;
  engine_.cancel(tx_end_);
  tx_end_ = engine_.schedule(new_until, EventKind::TxEnd, -1,
                             [this]() { on_medium_released(); });
}

void MacSystem::on_medium_released() {
  busy_ = false;
  const bool was_collision = active_transmitters_.size() >= 2;
  for (MacDevice* dev : active_transmitters_) {
    TIWIFI_CHECK(dev->phase_ == ContentionPhase::Transmitting,
                 "transmitter lost its phase");
    if (!was_collision) {
      dev->finish_win_exchange();
      dev->reset_cw();
    }
    dev->phase_ = ContentionPhase::Idle;
    dev->counter_ = -1;
  }
  active_transmitters_.clear();

  for (auto& dev : devices_) {
    if (!dev) continue;
    if (dev->phase_ == ContentionPhase::Frozen) {
      dev->phase_ = ContentionPhase::Waiting;
      schedule_attempt(dev.get());
    } else if (dev->phase_ == ContentionPhase::Idle) {
      offer_contention(dev.get());
    }
  }
}

void MacSystem::note_external_service(StaDevice* dev) {
  TIWIFI_CHECK(dev->phase_ == ContentionPhase::Frozen ||
                   dev->phase_ == ContentionPhase::Idle,
               "scheduled UL service outside a frozen interval");
  dev->reset_cw();
  dev->counter_ = -1;
  if (!dev->has_content()) {
    dev->phase_ = ContentionPhase::Idle;
  } else if (dev->phase_ == ContentionPhase::Frozen) {
    dev->counter_ = static_cast<int>(dev->rng_.uniform_int(0, dev->cw_));
  }
}

void MacSystem::deliver_ul_ampdu(const Ampdu& ampdu, SimTime tx_start,
                                 SimTime rx_time) {
  for (const Mpdu& m : ampdu.mpdus) {
    observer_.on_mpdu_delivered(m, rx_time);
  }
  if (ap_ != nullptr) {
    ap_->update_bsr(ampdu.src, ampdu.reported_occupancy, tx_start);
  }
}

std::int64_t MacSystem::residual_mpdus() const {
  std::int64_t n = 0;
  for (const auto& dev : devices_) {
    if (dev) n += dev->tx_queue().residual_count();
  }
  return n;
}

}  // namespace tiwifi
