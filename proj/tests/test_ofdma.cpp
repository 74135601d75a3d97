#include "doctest.h"
#include "ofdma.hpp"
#include "rng.hpp"

using namespace tiwifi;

TEST_CASE("three backlogged STAs form pairs, highest occupancy first") {
  // A=1:5, B=2:2, C=3:7 -> [[C,A],[B]]; the trailing STA gets the full band.
  const auto groups = group_stas({{1, 5}, {2, 2}, {3, 7}});
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].members == std::vector<DeviceId>{3, 1});
  CHECK(groups[1].members == std::vector<DeviceId>{2});
}

TEST_CASE("six backlogged STAs form one quad and one pair") {
  const auto groups = group_stas(
      {{1, 9}, {2, 8}, {3, 7}, {4, 6}, {5, 5}, {6, 4}});
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].members == std::vector<DeviceId>{1, 2, 3, 4});
  CHECK(groups[0].occupancies == std::vector<int>{9, 8, 7, 6});
  CHECK(groups[1].members == std::vector<DeviceId>{5, 6});
}

TEST_CASE("a single backlogged STA gets a singleton group") {
  const auto groups = group_stas({{4, 3}});
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].members == std::vector<DeviceId>{4});
}

TEST_CASE("zero-occupancy STAs are filtered out") {
  const auto groups = group_stas({{1, 0}, {2, 3}, {3, 0}});
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].members == std::vector<DeviceId>{2});
  CHECK(group_stas({{1, 0}, {2, 0}}).empty());
  CHECK(group_stas({}).empty());
}

TEST_CASE("occupancy ties break by ascending device id") {
  const auto groups = group_stas({{9, 4}, {2, 4}, {5, 4}});
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].members == std::vector<DeviceId>{2, 5});
  CHECK(groups[1].members == std::vector<DeviceId>{9});
}

TEST_CASE("five STAs with data split four plus one") {
  const auto groups =
      group_stas({{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}});
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].size() == 4);
  CHECK(groups[1].size() == 1);
  CHECK(groups[1].members == std::vector<DeviceId>{1});
}

TEST_CASE("grouping properties over random occupancy maps") {
  RngStream rng(123, 0);
  for (int iter = 0; iter < 300; ++iter) {
    std::map<DeviceId, int> occ;
    const int stas = static_cast<int>(rng.uniform_int(1, 12));
    for (int s = 1; s <= stas; ++s) {
      occ[s] = static_cast<int>(rng.uniform_int(0, 20));
    }
    const auto groups = group_stas(occ);
    int with_data = 0;
    for (const auto& [sta, o] : occ) {
      with_data += o > 0 ? 1 : 0;
    }
    const int group_size = with_data < 4 ? 2 : 4;
    int seen = 0;
    int prev = 1 << 30;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      CHECK(groups[g].size() >= 1);
      CHECK(groups[g].size() <= 4);
      if (g + 1 < groups.size()) {
        CHECK(groups[g].size() == group_size);
      }
      for (int o : groups[g].occupancies) {
        // Highest-first: concatenated occupancies are non-increasing.
        CHECK(o <= prev);
        prev = o;
        ++seen;
      }
    }
    CHECK(seen == with_data);
  }
}

TEST_CASE("the BSR table defaults to one MPDU and keeps the latest report") {
  BsrTable table;
  CHECK(table.occupancy(4) == 1);
  CHECK_FALSE(table.heard_from(4));
  table.update(4, 4, us(100));
  CHECK(table.occupancy(4) == 4);
  CHECK(table.heard_from(4));
  table.update(4, 0, us(200));
  CHECK(table.occupancy(4) == 0);  // latest wins
}
