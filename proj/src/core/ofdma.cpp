#include "ofdma.hpp"

#include <algorithm>

namespace tiwifi {

std::vector<ScheduleGroup> group_stas(
    const std::map<DeviceId, int>& occupancies) {
  std::vector<std::pair<DeviceId, int>> with_data;
  for (const auto& [sta, occ] : occupancies) {
    if (occ > 0) {
      with_data.emplace_back(sta, occ);
    }
  }
  std::sort(with_data.begin(), with_data.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });

  const int group_size = static_cast<int>(with_data.size()) < 4 ? 2 : 4;
  std::vector<ScheduleGroup> groups;
  for (std::size_t i = 0; i < with_data.size(); i += group_size) {
    ScheduleGroup g;
    for (std::size_t j = i;
         j < std::min(with_data.size(), i + group_size); ++j) {
      g.members.push_back(with_data[j].first);
      g.occupancies.push_back(with_data[j].second);
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace tiwifi
