#include "config.hpp"
#include "doctest.h"
#include "error.hpp"

using namespace tiwifi;

TEST_CASE("defaults validate and carry the headline constants") {
  ExperimentConfig cfg;
  cfg.validate();
  CHECK(cfg.payload_bytes() == 2500);  // 20 Mbps / (8 * 1 kHz)
  CHECK(cfg.sampling_period() == ms(1));
  CHECK(cfg.duration_ticks() == 10000);
  CHECK(cfg.sta_counts.size() == 12);
  const MacParams mac = cfg.mac_params();
  CHECK(mac.cw_min == 3);
  CHECK(mac.cw_max == 7);
  CHECK(mac.mpdu_on_air_bytes() == 2544);
  const PhyParams phy = cfg.phy_params();
  CHECK(phy.budget.max_ppdu_duration == us(5400));
  CHECK(phy.budget.sifs == us(16));
}

TEST_CASE("serialize-parse round trip is a fixed point") {
  ExperimentConfig cfg;
  cfg.sta_counts = {1, 4, 12};
  cfg.seeds = {7, 8};
  cfg.duration_ms = 2500;
  cfg.motion_max_hz = 3.5;
  const std::string once = serialize_config(cfg);
  const ExperimentConfig reparsed = parse_config(once);
  CHECK(reparsed == cfg);
  CHECK(serialize_config(reparsed) == once);
}

TEST_CASE("integer lists accept ranges") {
  const ExperimentConfig cfg = parse_config(
      "[run]\nsta_counts = 1..4, 8\nseeds = 5..6\n");
  CHECK(cfg.sta_counts == std::vector<int>{1, 2, 3, 4, 8});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{5, 6});
}

TEST_CASE("unknown keys and sections are rejected") {
  CHECK_THROWS_WITH_AS(parse_config("[run]\nbogus = 1\n"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[nonsense]\n"),
                       doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("duration_ms = 5\n"),
                       doctest::Contains("outside any section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[run]\nduration_ms : 5\n"),
                       doctest::Contains("expected key = value"), ConfigError);
}

TEST_CASE("malformed values name the key") {
  CHECK_THROWS_WITH_AS(parse_config("[run]\nduration_ms = soon\n"),
                       doctest::Contains("run.duration_ms"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[run]\ndisciplines = fancy\n"),
                       doctest::Contains("unknown discipline"), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  const ExperimentConfig cfg = parse_config(
      "# experiment\n\n[run]\n; note\nduration_ms = 1234\n");
  CHECK(cfg.duration_ms == 1234);
}

TEST_CASE("validation rejects inconsistent settings") {
  ExperimentConfig cfg;
  SUBCASE("rate not a whole number of bytes per sample") {
    cfg.per_sta_rate_bps = 20'000'001;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("warmup at least as long as the run") {
    cfg.warmup_ms = cfg.duration_ms;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("empty sweep lists") {
    cfg.sta_counts.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("zero STAs") {
    cfg.sta_counts = {0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("inverted contention windows") {
    cfg.cw_min = 8;
    cfg.cw_max = 7;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("tone plan out of order") {
    cfg.tones_half = cfg.tones_full + 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("csv source without a path") {
    cfg.trace_source = "csv";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("an MPDU too large for the PPDU cap") {
    cfg.per_sta_rate_bps = 8LL * 1000 * 4'000'000;  // 4 MB payloads
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}

TEST_CASE("overrides apply by section.key") {
  ExperimentConfig cfg;
  apply_override(cfg, "run.duration_ms=777");
  apply_override(cfg, "mac.cw_max = 15");
  apply_override(cfg, "run.disciplines=nobus");
  CHECK(cfg.duration_ms == 777);
  CHECK(cfg.cw_max == 15);
  REQUIRE(cfg.disciplines.size() == 1);
  CHECK(cfg.disciplines[0] == Discipline::Nobus);
  CHECK_THROWS_WITH_AS(apply_override(cfg, "run.nope=1"),
                       doctest::Contains("unknown config key"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "no-equals-sign"), ConfigError);
}
