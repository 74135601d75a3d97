#include <cstdint>

#include "doctest.h"
#include "error.hpp"
#include "phy.hpp"
#include "rng.hpp"

using namespace tiwifi;

namespace {

// Independent airtime oracle: walk symbol by symbol, accumulating capacity
// in exact integer arithmetic, until the PSDU bits fit.
SimTime oracle_airtime(std::int64_t payload_bytes, int tones,
                       const AirtimeBudget& budget, const McsParams& mcs) {
  const std::int64_t bits_scaled = (16 + 8 * payload_bytes + 6) * mcs.coding_den;
  const std::int64_t per_symbol =
      static_cast<std::int64_t>(tones) * mcs.bits_per_subcarrier *
      mcs.coding_num;
  std::int64_t symbols = 0;
  std::int64_t capacity = 0;
  do {
    ++symbols;
    capacity += per_symbol;
  } while (capacity < bits_scaled);
  return budget.preamble + symbols * mcs.symbol_plus_gi();
}

int oracle_max_mpdus(std::int64_t mpdu_bytes, int tones,
                     const AirtimeBudget& budget, const McsParams& mcs) {
  int k = 0;
  while (true) {
    const SimTime air = oracle_airtime((k + 1) * mpdu_bytes, tones, budget, mcs);
    if (air > budget.max_ppdu_duration) {
      return k;
    }
    ++k;
  }
}

}  // namespace

TEST_CASE("data_rate at MCS-9 matches the hand calculation") {
  McsParams mcs;
  // 3920 * 8 * 5/6 bits per 13.6 us symbol = 1.9216 Gbps
  CHECK(data_rate(3920, mcs) == 1'921'568'627);
  // 980 tones: 480.4 Mbps
  CHECK(data_rate(980, mcs) == 480'392'156);
  CHECK(data_rate(1960, mcs) == 960'784'313);
}

TEST_CASE("data_rate degenerate unit case") {
  McsParams mcs;
  mcs.bits_per_subcarrier = 1;
  mcs.coding_num = 1;
  mcs.coding_den = 1;
  mcs.symbol_duration = kSecond;
  mcs.guard_interval = 0;
  CHECK(data_rate(1, mcs) == 1);
}

TEST_CASE("data_rate rejects a non-positive tone count") {
  McsParams mcs;
  CHECK_THROWS_AS(data_rate(0, mcs), SimError);
}

TEST_CASE("data_rate doubles with the tone count, up to truncation") {
  McsParams mcs;
  for (int tones : {26, 980, 1960}) {
    const auto r1 = data_rate(tones, mcs);
    const auto r2 = data_rate(2 * tones, mcs);
    CHECK(r2 >= 2 * r1 - 1);
    CHECK(r2 <= 2 * r1 + 1);
  }
}

TEST_CASE("ppdu_airtime of the empty payload is the one-symbol floor") {
  McsParams mcs;
  AirtimeBudget budget;
  const auto air = ppdu_airtime(0, 3920, budget, mcs);
  REQUIRE(air.has_value());
  CHECK(*air == budget.preamble + mcs.symbol_plus_gi());
}

TEST_CASE("ppdu_airtime for one 2544 B MPDU on a quarter RU") {
  McsParams mcs;
  AirtimeBudget budget;
  // ceil((16 + 8*2544 + 6) / (980*8*5/6)) = ceil(20374/6533.33) = 4 symbols
  const auto air = ppdu_airtime(2544, 980, budget, mcs);
  REQUIRE(air.has_value());
  CHECK(*air == us(48) + 4 * us(13) + 4 * 600);  // 48 us + 4 * 13.6 us
  CHECK(*air == 102'400);
}

TEST_CASE("ppdu_airtime reports over-budget payloads") {
  McsParams mcs;
  AirtimeBudget budget;
  // 5.4 ms at 3920 tones fits ~393 symbols; ask for far more.
  CHECK_FALSE(ppdu_airtime(4'000'000, 3920, budget, mcs).has_value());
  CHECK(ppdu_airtime(1'000'000, 3920, budget, mcs).has_value());
}

TEST_CASE("airtime equals the symbol-walk oracle on randomized inputs") {
  McsParams mcs;
  AirtimeBudget budget;
  RngStream rng(20240601, 0);
  const int tone_options[] = {980, 1960, 3920, 484, 242};
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const std::int64_t payload = rng.uniform_int(0, 1'200'000);
    const int tones = tone_options[rng.uniform_int(0, 4)];
    const SimTime expect = oracle_airtime(payload, tones, budget, mcs);
    const auto got = ppdu_airtime(payload, tones, budget, mcs);
    if (expect > budget.max_ppdu_duration) {
      CHECK_FALSE(got.has_value());
    } else {
      REQUIRE(got.has_value());
      CHECK(*got == expect);
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("ppdu_airtime is monotone in payload and antitone in tones") {
  McsParams mcs;
  AirtimeBudget budget;
  RngStream rng(99, 0);
  for (int i = 0; i < 500; ++i) {
    const std::int64_t payload = rng.uniform_int(0, 500'000);
    const std::int64_t more = payload + rng.uniform_int(1, 10'000);
    const auto a = ppdu_airtime(payload, 980, budget, mcs);
    const auto b = ppdu_airtime(more, 980, budget, mcs);
    if (a && b) CHECK(*a <= *b);
    const auto narrow = ppdu_airtime(payload, 980, budget, mcs);
    const auto wide = ppdu_airtime(payload, 3920, budget, mcs);
    if (narrow && wide) CHECK(*wide <= *narrow);
  }
}

TEST_CASE("max_ampdu_mpdus matches the increment-until-over oracle") {
  McsParams mcs;
  AirtimeBudget budget;
  RngStream rng(7, 0);
  for (int i = 0; i < 40; ++i) {
    const std::int64_t mpdu = rng.uniform_int(200, 60'000);
    const int tones = i % 2 == 0 ? 980 : 3920;
    CHECK(max_ampdu_mpdus(mpdu, tones, budget, mcs) ==
          oracle_max_mpdus(mpdu, tones, budget, mcs));
  }
}

TEST_CASE("2544 B MPDUs aggregate to hundreds at full band") {
  McsParams mcs;
  AirtimeBudget budget;
  const int k = max_ampdu_mpdus(2544, 3920, budget, mcs);
  CHECK(k == oracle_max_mpdus(2544, 3920, budget, mcs));
  CHECK(k >= 100);
  CHECK(k < 1000);
}

TEST_CASE("a barely-fitting MPDU aggregates exactly once") {
  McsParams mcs;
  AirtimeBudget budget;
  // One MPDU fills more than half the budget, so two cannot fit.
  const std::int64_t bytes = 1'000'000;
  const auto single = ppdu_airtime(bytes, 3920, budget, mcs);
  REQUIRE(single.has_value());
  CHECK(*single > budget.max_ppdu_duration / 2);
  CHECK(max_ampdu_mpdus(bytes, 3920, budget, mcs) == 1);
}

TEST_CASE("max_ampdu_mpdus returns 0 when nothing fits") {
  McsParams mcs;
  AirtimeBudget budget;
  CHECK(max_ampdu_mpdus(4'000'000, 3920, budget, mcs) == 0);
}

TEST_CASE("aggregation capacity grows with tones") {
  McsParams mcs;
  AirtimeBudget budget;
  CHECK(max_ampdu_mpdus(2544, 3920, budget, mcs) >=
        max_ampdu_mpdus(2544, 980, budget, mcs));
}

TEST_CASE("tones_for_group follows the RU split") {
  PhyParams phy;
  CHECK(phy.tones_for_group(1) == 3920);
  CHECK(phy.tones_for_group(2) == 1960);
  CHECK(phy.tones_for_group(3) == 980);
  CHECK(phy.tones_for_group(4) == 980);
}
