#include "trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace tiwifi {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Sinusoid {
  double amplitude;
  double freq_hz;
  double phase;
};

}  // namespace

SensorTrace generate_trace(std::uint64_t seed, std::int64_t duration_ticks,
                           const MotionParams& params) {
  TIWIFI_CHECK(duration_ticks > 0, "trace duration must be positive");
  RngStream rng(seed, 0);

  SensorTrace trace;
  trace.samples.resize(duration_ticks);
  for (std::int64_t t = 0; t < duration_ticks; ++t) {
    trace.samples[t].tick = t;
  }
  if (params.components == 0) {
    return trace;  // constant-zero trace
  }

  for (int axis = 0; axis < 3; ++axis) {
    std::vector<Sinusoid> parts(params.components);
    for (auto& p : parts) {
      p.amplitude = rng.uniform_real(0.2, 1.0);
      p.freq_hz = rng.uniform_real(params.min_hz, params.max_hz);
      p.phase = rng.uniform_real(0.0, kTwoPi);
    }
    std::vector<double> raw(duration_ticks);
    for (std::int64_t t = 0; t < duration_ticks; ++t) {
      const double sec = static_cast<double>(t) * 1e-3;
      double v = 0.0;
      for (const auto& p : parts) {
        v += p.amplitude * std::sin(kTwoPi * p.freq_hz * sec + p.phase);
      }
      raw[t] = v;
    }

    std::vector<double> magnitudes(duration_ticks);
    for (std::int64_t t = 0; t < duration_ticks; ++t) {
      magnitudes[t] = std::abs(raw[t]);
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    const auto p99_index =
        static_cast<std::size_t>(0.99 * static_cast<double>(duration_ticks));
    const double p99 =
        magnitudes[std::min(p99_index, magnitudes.size() - 1)];
    const double peak = magnitudes.back();
    double scale = 0.0;
    if (peak > 0.0) {
      scale = params.target_p99_cm / std::max(p99, 1e-12);
      // Pure rescaling keeps the signal differentiable; clamping would not.
      scale = std::min(scale, params.max_abs_cm / peak);
    }
    for (std::int64_t t = 0; t < duration_ticks; ++t) {
      trace.samples[t].position[axis] = raw[t] * scale;
    }
  }
  return trace;
}

SensorTrace load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open trace file: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("trace file " + path + ": no samples");
  }
  // allow a UTF-8 BOM before the header
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  if (line != "tick,x,y,z") {
    throw ConfigError("trace file " + path +
                      ": expected header 'tick,x,y,z', got '" + line + "'");
  }

  SensorTrace trace;
  std::int64_t expected_tick = 0;
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::istringstream row(line);
    std::string field;
    TraceSample sample;
    try {
      std::size_t pos = 0;
      if (!std::getline(row, field, ',')) throw std::invalid_argument(field);
      sample.tick = std::stoll(field, &pos);
      if (pos != field.size()) throw std::invalid_argument(field);
      for (int axis = 0; axis < 3; ++axis) {
        if (!std::getline(row, field, ',')) {
          throw std::invalid_argument(field);
        }
        sample.position[axis] = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
      }
    } catch (const std::exception&) {
      throw ConfigError("trace file " + path + ": non-numeric field at line " +
                        std::to_string(line_no));
    }
    if (std::string extra; std::getline(row, extra, ',')) {
      throw ConfigError("trace file " + path + ": too many fields at line " +
                        std::to_string(line_no));
    }
    if (sample.tick < expected_tick) {
      throw ConfigError("trace file " + path + ": duplicate tick " +
                        std::to_string(sample.tick) + " at line " +
                        std::to_string(line_no));
    }
    if (sample.tick > expected_tick) {
      throw ConfigError("trace file " + path + ": gap at tick " +
                        std::to_string(expected_tick));
    }
    trace.samples.push_back(sample);
    ++expected_tick;
  }
  if (trace.samples.empty()) {
    throw ConfigError("trace file " + path + ": no samples");
  }
  return trace;
}

}  // namespace tiwifi
