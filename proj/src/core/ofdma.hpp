#ifndef TIWIFI_OFDMA_HPP
#define TIWIFI_OFDMA_HPP

#include <map>
#include <vector>

#include "mpdu.hpp"
#include "sim_time.hpp"

namespace tiwifi {

struct BufferStatusReport {
  int reported_occupancy = 0;
  SimTime reported_at = 0;
};

// AP-side table of the latest unsolicited buffer status report per STA.
// A STA that has never been heard is assumed to hold one MPDU, so periodic
// 1 kHz sources are schedulable from the start of the run.
class BsrTable {
 public:
  explicit BsrTable(int default_occupancy = 1)
      : default_occupancy_(default_occupancy) {}

  void update(DeviceId sta, int occupancy, SimTime reported_at) {
    table_[sta] = BufferStatusReport{occupancy, reported_at};
  }

  int occupancy(DeviceId sta) const {
    auto it = table_.find(sta);
    return it == table_.end() ? default_occupancy_
                              : it->second.reported_occupancy;
  }

  SimTime reported_at(DeviceId sta) const {
    auto it = table_.find(sta);
    return it == table_.end() ? 0 : it->second.reported_at;
  }

  bool heard_from(DeviceId sta) const { return table_.count(sta) != 0; }

 private:
  int default_occupancy_;
  std::map<DeviceId, BufferStatusReport> table_;
};

// One OFDMA group: members in service order, sharing equal-size RUs.
struct ScheduleGroup {
  std::vector<DeviceId> members;  // descending occupancy, ties by id
  std::vector<int> occupancies;   // aligned with members

  int size() const { return static_cast<int>(members.size()); }
};

// Highest-first grouping: STAs with data sorted by descending occupancy
// (ties by ascending id), partitioned sequentially into groups of two when
// fewer than four STAs have data and groups of four otherwise; a trailing
// partial group keeps its natural size.
std::vector<ScheduleGroup> group_stas(
    const std::map<DeviceId, int>& occupancies);

struct TxopPlan {
  std::vector<ScheduleGroup> dl_groups;
  std::vector<ScheduleGroup> ul_groups;
  SimTime snapshot_at = 0;

  bool empty() const { return dl_groups.empty() && ul_groups.empty(); }
};

}  // namespace tiwifi

#endif
