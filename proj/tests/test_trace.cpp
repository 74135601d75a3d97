#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "error.hpp"
#include "trace.hpp"

using namespace tiwifi;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "trace_test_" + name + ".csv";
  std::ofstream out(path);
  out << content;
  out.close();
  return path;
}

}  // namespace

TEST_CASE("zero components produce a constant-zero trace") {
  MotionParams params;
  params.components = 0;
  const SensorTrace trace = generate_trace(1, 500, params);
  CHECK(trace.duration_ticks() == 500);
  for (const auto& s : trace.samples) {
    CHECK(s.position[0] == 0.0);
    CHECK(s.position[1] == 0.0);
    CHECK(s.position[2] == 0.0);
  }
}

TEST_CASE("generated traces stay within the hard amplitude bound") {
  MotionParams params;
  for (std::uint64_t seed : {1ULL, 2ULL, 77ULL, 4096ULL, 31337ULL}) {
    const SensorTrace trace = generate_trace(seed, 10000, params);
    double peak = 0.0;
    for (const auto& s : trace.samples) {
      for (int axis = 0; axis < 3; ++axis) {
        peak = std::max(peak, std::abs(s.position[axis]));
      }
    }
    CHECK(peak <= params.max_abs_cm + 1e-9);
    CHECK(peak > 1.0);  // normalization keeps the signal hand-scale
  }
}

TEST_CASE("ticks are contiguous from zero") {
  const SensorTrace trace = generate_trace(5, 1000, MotionParams{});
  for (std::int64_t t = 0; t < trace.duration_ticks(); ++t) {
    CHECK(trace.samples[t].tick == t);
  }
}

TEST_CASE("the same seed reproduces the trace") {
  const SensorTrace a = generate_trace(99, 2000, MotionParams{});
  const SensorTrace b = generate_trace(99, 2000, MotionParams{});
  REQUIRE(a.duration_ticks() == b.duration_ticks());
  for (std::int64_t t = 0; t < a.duration_ticks(); ++t) {
    CHECK(a.samples[t].position == b.samples[t].position);
  }
  const SensorTrace c = generate_trace(100, 2000, MotionParams{});
  bool all_equal = true;
  for (std::int64_t t = 0; t < a.duration_ticks(); ++t) {
    all_equal = all_equal && a.samples[t].position == c.samples[t].position;
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("csv loader accepts a small valid trace") {
  const std::string path = write_temp(
      "ok", "tick,x,y,z\n0,1.5,-2.0,0.25\n1,1.6,-1.9,0.30\n2,1.7,-1.8,0.35\n");
  const SensorTrace trace = load_trace_csv(path);
  CHECK(trace.duration_ticks() == 3);
  CHECK(trace.samples[1].position[0] == doctest::Approx(1.6));
  CHECK(trace.samples[2].position[2] == doctest::Approx(0.35));
  std::remove(path.c_str());
}

TEST_CASE("csv loader rejects a gap in ticks") {
  const std::string path =
      write_temp("gap", "tick,x,y,z\n0,0,0,0\n2,0,0,0\n");
  CHECK_THROWS_WITH_AS(load_trace_csv(path),
                       doctest::Contains("gap at tick 1"), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("csv loader rejects duplicate ticks") {
  const std::string path =
      write_temp("dup", "tick,x,y,z\n0,0,0,0\n0,1,1,1\n");
  CHECK_THROWS_WITH_AS(load_trace_csv(path), doctest::Contains("duplicate"),
                       ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("csv loader rejects an empty file") {
  const std::string path = write_temp("empty", "");
  CHECK_THROWS_WITH_AS(load_trace_csv(path), doctest::Contains("no samples"),
                       ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("csv loader rejects a header-only file") {
  const std::string path = write_temp("hdr", "tick,x,y,z\n");
  CHECK_THROWS_WITH_AS(load_trace_csv(path), doctest::Contains("no samples"),
                       ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("csv loader names the line of a non-numeric field") {
  const std::string path =
      write_temp("nan", "tick,x,y,z\n0,0,0,0\n1,zero,0,0\n");
  CHECK_THROWS_WITH_AS(load_trace_csv(path),
                       doctest::Contains("non-numeric field at line 3"),
                       ConfigError);
  std::remove(path.c_str());
}
