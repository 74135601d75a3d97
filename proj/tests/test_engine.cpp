#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "event_engine.hpp"
#include "rng.hpp"

using namespace tiwifi;

TEST_CASE("event at the current instant fires before any later event") {
  Engine engine;
  std::vector<int> order;
  engine.schedule(us(1), EventKind::TxPhase, 0, [&] { order.push_back(2); });
  engine.schedule(0, EventKind::TxPhase, 0, [&] {
    order.push_back(1);
    engine.schedule(0, EventKind::TxPhase, 0, [&] { order.push_back(10); });
  });
  engine.run_until(us(2));
  CHECK(order == std::vector<int>{1, 10, 2});
}

TEST_CASE("equal fire times dispatch in scheduling order") {
  Engine engine;
  std::vector<int> order;
  for (int i = 0; i < 6; ++i) {
    engine.schedule(us(1), EventKind::TxPhase, i,
                    [&order, i] { order.push_back(i); });
  }
  engine.run_until(us(1));
  CHECK(order == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("a cancelled event never fires") {
  Engine engine;
  bool fired = false;
  EventHandle h =
      engine.schedule(us(5), EventKind::TxPhase, 0, [&] { fired = true; });
  engine.cancel(h);
  const RunSummary s = engine.run_until(ms(1));
  CHECK_FALSE(fired);
  CHECK(s.events_fired == 0);
  CHECK_FALSE(h.valid());
}

TEST_CASE("run_until on an empty queue returns early with zero events") {
  Engine engine;
  const RunSummary s = engine.run_until(kSecond);
  CHECK(s.events_fired == 0);
  CHECK(s.final_clock == kSecond);
}

TEST_CASE("events beyond the horizon stay queued") {
  Engine engine;
  bool fired = false;
  engine.schedule(us(5), EventKind::TxPhase, 0, [&] { fired = true; });
  const RunSummary s = engine.run_until(us(1));
  CHECK(s.events_fired == 0);
  CHECK(s.final_clock == us(1));
  CHECK_FALSE(fired);
  engine.run_until(us(5));
  CHECK(fired);
}

TEST_CASE("periodic self-rescheduling events fire a closed-form count") {
  // N generators with 1 ms period over 1 s: each fires at 1ms..1000ms
  // inclusive, so exactly 1000*N dispatches.
  constexpr int kGenerators = 7;
  Engine engine;
  std::int64_t fired = 0;
  std::function<void(int)> tick = [&](int gen) {
    ++fired;
    if (engine.now() + ms(1) <= kSecond) {
      engine.schedule(engine.now() + ms(1), EventKind::SampleGeneration, gen,
                      [&tick, gen] { tick(gen); });
    }
  };
  for (int g = 0; g < kGenerators; ++g) {
    engine.schedule(ms(1), EventKind::SampleGeneration, g,
                    [&tick, g] { tick(g); });
  }
  const RunSummary s = engine.run_until(kSecond);
  CHECK(fired == 1000 * kGenerators);
  CHECK(s.events_fired == 1000 * kGenerators);
}

TEST_CASE("scheduling in the past aborts the run") {
  Engine engine;
  engine.schedule(us(10), EventKind::TxPhase, 0, [&] {
    CHECK_THROWS_AS(
        engine.schedule(us(5), EventKind::TxPhase, 0, [] {}),
        SimError);
  });
  engine.run_until(us(10));
}

TEST_CASE("dispatch times are monotonically non-decreasing") {
  Engine engine;
  RngStream rng(7, 0);
  SimTime last = 0;
  bool ok = true;
  for (int i = 0; i < 1000; ++i) {
    const SimTime at = rng.uniform_int(0, us(500));
    engine.schedule(at, EventKind::TxPhase, 0, [&, at] {
      ok = ok && at >= last;
      last = at;
    });
  }
  engine.run_until(ms(1));
  CHECK(ok);
}

TEST_CASE("uniform_int degenerate range") {
  RngStream rng(1, 2);
  for (int i = 0; i < 100; ++i) {
    CHECK(rng.uniform_int(0, 0) == 0);
  }
}

TEST_CASE("uniform_int rejects inverted bounds") {
  RngStream rng(1, 2);
  CHECK_THROWS_AS(rng.uniform_int(3, 2), SimError);
}

TEST_CASE("uniform_int frequencies over a million draws") {
  RngStream rng(42, 5);
  std::int64_t counts[4] = {0, 0, 0, 0};
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) {
    const auto v = rng.uniform_int(0, 3);
    REQUIRE(v >= 0);
    REQUIRE(v <= 3);
    ++counts[v];
  }
  for (std::int64_t c : counts) {
    const double freq = static_cast<double>(c) / kDraws;
    CHECK(freq == doctest::Approx(0.25).epsilon(0.04));  // 0.25 +/- 0.01
  }
}

TEST_CASE("identical (seed, stream) reproduces the draw sequence") {
  RngStream a(987654321, 3);
  RngStream b(987654321, 3);
  for (int i = 0; i < 10000; ++i) {
    CHECK(a.uniform_int(0, 1 << 20) == b.uniform_int(0, 1 << 20));
  }
}

TEST_CASE("different stream ids decorrelate") {
  RngStream a(11, 1);
  RngStream b(11, 2);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) {
    if (a.uniform_int(0, 1000) == b.uniform_int(0, 1000)) ++equal;
  }
  CHECK(equal < 50);
}
