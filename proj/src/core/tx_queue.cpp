#include "tx_queue.hpp"

#include <algorithm>

#include "error.hpp"

namespace tiwifi {

const char* discipline_name(Discipline d) {
  return d == Discipline::Vanilla ? "vanilla" : "nobus";
}

std::optional<Discipline> parse_discipline(const std::string& name) {
  if (name == "vanilla") return Discipline::Vanilla;
  if (name == "nobus") return Discipline::Nobus;
  return std::nullopt;
}

void TxQueue::check_depth(const DstState& st) const {
  if (discipline_ == Discipline::Nobus) {
    TIWIFI_CHECK(st.fifo.size() <= 1, "nobus queue depth exceeded 1");
  }
}

EnqueueReport TxQueue::enqueue(Mpdu mpdu) {
  auto& st = dsts_[mpdu.dst];
  EnqueueReport report;
  if (discipline_ == Discipline::Nobus && !st.fifo.empty()) {
    report.replaced = std::move(st.fifo.front());
    st.fifo.clear();
    ++proactive_drop_count_;
  }
  st.fifo.push_back(std::move(mpdu));
  check_depth(st);
  return report;
}

int TxQueue::depth(DeviceId dst) const {
  auto it = dsts_.find(dst);
  return it == dsts_.end() ? 0 : static_cast<int>(it->second.fifo.size());
}

int TxQueue::occupancy(DeviceId dst) const {
  auto it = dsts_.find(dst);
  if (it == dsts_.end()) return 0;
  return static_cast<int>(it->second.fifo.size() + it->second.inflight.size());
}

bool TxQueue::empty() const {
  for (const auto& [dst, st] : dsts_) {
    if (!st.fifo.empty()) return false;
  }
  return true;
}

std::vector<DeviceId> TxQueue::backlogged() const {
  std::vector<DeviceId> out;
  for (const auto& [dst, st] : dsts_) {
    if (!st.fifo.empty()) out.push_back(dst);
  }
  return out;
}

std::vector<Mpdu> TxQueue::bind(DeviceId dst, int max_mpdus,
                                SimTime snapshot_at, SimTime now) {
  auto& st = dsts_[dst];
  TIWIFI_CHECK(st.inflight.empty(), "binding over an unresolved transmission");
  TIWIFI_CHECK(max_mpdus >= 1, "bind needs room for at least one MPDU");
  std::vector<Mpdu> bound;
  if (discipline_ == Discipline::Nobus) {
    if (!st.fifo.empty()) {
      bound.push_back(std::move(st.fifo.front()));
      st.fifo.clear();
    }
  } else {
    while (!st.fifo.empty() && static_cast<int>(bound.size()) < max_mpdus &&
           st.fifo.front().enqueued_at <= snapshot_at) {
      bound.push_back(std::move(st.fifo.front()));
      st.fifo.pop_front();
    }
  }
  for (auto& m : bound) {
    if (m.first_attempt_at < 0) {
      m.first_attempt_at = now;
    }
  }
  st.inflight = bound;
  return bound;
}

void TxQueue::on_bound_success(DeviceId dst) {
  auto& st = dsts_[dst];
  st.inflight.clear();
  check_depth(st);
}

CollisionReport TxQueue::on_bound_collision(DeviceId dst, int retry_limit) {
  auto& st = dsts_[dst];
  CollisionReport report;
  std::vector<Mpdu> survivors;
  for (auto& m : st.inflight) {
    ++m.retry_count;
    if (m.retry_count > retry_limit) {
      report.retry_dropped.push_back(std::move(m));
    } else {
      survivors.push_back(std::move(m));
    }
  }
  st.inflight.clear();

  if (discipline_ == Discipline::Nobus) {
    TIWIFI_CHECK(survivors.size() <= 1, "nobus flight carried several MPDUs");
    if (!survivors.empty()) {
      if (!st.fifo.empty()) {
        // A newer sample arrived during the attempt; it stays resident and
        // the collided MPDU is discarded instead of retried.
        report.proactive_dropped.push_back(std::move(survivors.front()));
        ++proactive_drop_count_;
      } else {
        st.fifo.push_back(std::move(survivors.front()));
        report.survivor_requeued = true;
      }
    }
  } else {
    for (auto it = survivors.rbegin(); it != survivors.rend(); ++it) {
      st.fifo.push_front(std::move(*it));
    }
    report.survivor_requeued = !survivors.empty();
  }
  check_depth(st);
  return report;
}

bool TxQueue::has_inflight(DeviceId dst) const {
  auto it = dsts_.find(dst);
  return it != dsts_.end() && !it->second.inflight.empty();
}

std::int64_t TxQueue::residual_count() const {
  std::int64_t n = 0;
  for (const auto& [dst, st] : dsts_) {
    n += static_cast<std::int64_t>(st.fifo.size() + st.inflight.size());
  }
  return n;
}

std::int64_t TxQueue::residual_for(DeviceId dst) const {
  auto it = dsts_.find(dst);
  if (it == dsts_.end()) return 0;
  return static_cast<std::int64_t>(it->second.fifo.size() +
                                   it->second.inflight.size());
}

}  // namespace tiwifi
