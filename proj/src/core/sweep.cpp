#include "sweep.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "simulation.hpp"

namespace tiwifi {

namespace {

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return out;
}

const char* kRawHeader =
    "discipline,sta_count,seed,status,error,"
    "worst_dl_ns,worst_ul_ns,p50_dl_ns,p99_dl_ns,p50_ul_ns,p99_ul_ns,"
    "mean_dl_ns,mean_ul_ns,mean_ampdu_dl,mean_ampdu_ul,"
    "generated_dl,delivered_dl,retry_drops_dl,proactive_drops_dl,residual_dl,"
    "generated_ul,delivered_ul,retry_drops_ul,proactive_drops_ul,residual_ul,"
    "delivered_fraction_dl,delivered_fraction_ul,"
    "rmse_x_cm,rmse_y_cm,rmse_z_cm,rmse_ul_x_cm,"
    "attempts,attempts_collided,max_first_attempt_wait_ns,medium_busy_ns";

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config,
                      const ProgressFn& progress) {
  config.validate();
  SweepResult result;
  for (Discipline d : config.disciplines) {
    for (int sta_count : config.sta_counts) {
      for (std::uint64_t seed : config.seeds) {
        SweepRow row;
        row.discipline = d;
        row.sta_count = sta_count;
        row.seed = seed;
        try {
          row.metrics = simulate_run(config, sta_count, d, seed);
        } catch (const std::exception& e) {
          row.failed = true;
          row.error = e.what();
        }
        if (progress) {
          progress(row);
        }
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

std::vector<SweepAggregate> aggregate_sweep(const SweepResult& sweep) {
  std::map<std::pair<int, int>, std::vector<const SweepRow*>> buckets;
  for (const SweepRow& row : sweep.rows) {
    if (row.failed) continue;
    buckets[{row.sta_count, static_cast<int>(row.discipline)}].push_back(&row);
  }
  std::vector<SweepAggregate> out;
  for (const auto& [key, rows] : buckets) {
    SweepAggregate agg;
    agg.sta_count = key.first;
    agg.discipline = static_cast<Discipline>(key.second);
    agg.seed_runs = static_cast<int>(rows.size());
    for (const SweepRow* row : rows) {
      const RunMetrics& m = row->metrics;
      agg.worst_dl_ms = std::max(agg.worst_dl_ms, to_ms(m.latency_dl.worst));
      agg.worst_ul_ms = std::max(agg.worst_ul_ms, to_ms(m.latency_ul.worst));
      agg.worst_rtt_ms = std::max(agg.worst_rtt_ms, to_ms(m.worst_rtt()));
      agg.mean_ampdu_dl += m.mean_ampdu_dl;
      agg.mean_ampdu_ul += m.mean_ampdu_ul;
      agg.delivered_fraction_dl += m.delivered_fraction_dl;
      agg.delivered_fraction_ul += m.delivered_fraction_ul;
      agg.rmse_cm += m.rmse_cm;
      agg.collision_probability += m.collision_probability;
    }
    const double n = static_cast<double>(rows.size());
    agg.mean_ampdu_dl /= n;
    agg.mean_ampdu_ul /= n;
    agg.delivered_fraction_dl /= n;
    agg.delivered_fraction_ul /= n;
    agg.rmse_cm /= n;
    agg.collision_probability /= n;
    out.push_back(agg);
  }
  return out;
}

void write_sweep_raw_csv(const SweepResult& sweep, std::ostream& out) {
  out << kRawHeader << '\n';
  for (const SweepRow& row : sweep.rows) {
    const RunMetrics& m = row.metrics;
    out << discipline_name(row.discipline) << ',' << row.sta_count << ','
        << row.seed << ',' << (row.failed ? "failed" : "ok") << ','
        << sanitize(row.error) << ',' << m.latency_dl.worst << ','
        << m.latency_ul.worst << ',' << m.latency_dl.p50 << ','
        << m.latency_dl.p99 << ',' << m.latency_ul.p50 << ','
        << m.latency_ul.p99 << ',' << fmt(m.latency_dl.mean) << ','
        << fmt(m.latency_ul.mean) << ',' << fmt(m.mean_ampdu_dl) << ','
        << fmt(m.mean_ampdu_ul) << ',' << m.generated_dl << ','
        << m.delivered_dl << ',' << m.retry_drops_dl << ','
        << m.proactive_drops_dl << ',' << m.residual_dl << ','
        << m.generated_ul << ',' << m.delivered_ul << ','
        << m.retry_drops_ul << ',' << m.proactive_drops_ul << ','
        << m.residual_ul << ',' << fmt(m.delivered_fraction_dl) << ','
        << fmt(m.delivered_fraction_ul) << ',' << fmt(m.rmse_dl_cm[0]) << ','
        << fmt(m.rmse_dl_cm[1]) << ',' << fmt(m.rmse_dl_cm[2]) << ','
        << fmt(m.rmse_ul_cm[0]) << ',' << m.attempts << ','
        << m.attempts_collided << ',' << m.max_first_attempt_wait << ','
        << m.medium_busy << '\n';
  }
}

void write_sweep_agg_csv(const SweepResult& sweep, std::ostream& out) {
  out << "sta_count,discipline,seed_runs,worst_dl_ms,worst_ul_ms,worst_rtt_ms,"
         "mean_ampdu_dl,mean_ampdu_ul,delivered_fraction_dl,"
         "delivered_fraction_ul,rmse_cm,collision_probability\n";
  for (const SweepAggregate& a : aggregate_sweep(sweep)) {
    out << a.sta_count << ',' << discipline_name(a.discipline) << ','
        << a.seed_runs << ',' << fmt(a.worst_dl_ms) << ','
        << fmt(a.worst_ul_ms) << ',' << fmt(a.worst_rtt_ms) << ','
        << fmt(a.mean_ampdu_dl) << ',' << fmt(a.mean_ampdu_ul) << ','
        << fmt(a.delivered_fraction_dl) << ','
        << fmt(a.delivered_fraction_ul) << ',' << fmt(a.rmse_cm) << ','
        << fmt(a.collision_probability) << '\n';
  }
}

SweepResult load_sweep_raw_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open sweep file: " + path);
  }
  std::string line;
  if (!std::getline(in, line) || line != kRawHeader) {
    throw ConfigError("sweep file " + path +
                      " does not carry the expected header");
  }
  SweepResult result;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 35) {
      throw ConfigError("sweep file " + path + ": malformed row at line " +
                        std::to_string(line_no));
    }
    try {
      SweepRow row;
      auto d = parse_discipline(f[0]);
      if (!d) throw ConfigError("unknown discipline " + f[0]);
      row.discipline = *d;
      row.sta_count = std::stoi(f[1]);
      row.seed = std::stoull(f[2]);
      row.failed = f[3] != "ok";
      row.error = f[4];
      RunMetrics& m = row.metrics;
      m.sta_count = row.sta_count;
      m.discipline = row.discipline;
      m.seed = row.seed;
      m.latency_dl.worst = std::stoll(f[5]);
      m.latency_ul.worst = std::stoll(f[6]);
      m.latency_dl.p50 = std::stoll(f[7]);
      m.latency_dl.p99 = std::stoll(f[8]);
      m.latency_ul.p50 = std::stoll(f[9]);
      m.latency_ul.p99 = std::stoll(f[10]);
      m.latency_dl.mean = std::stod(f[11]);
      m.latency_ul.mean = std::stod(f[12]);
      m.mean_ampdu_dl = std::stod(f[13]);
      m.mean_ampdu_ul = std::stod(f[14]);
      m.generated_dl = std::stoll(f[15]);
      m.delivered_dl = std::stoll(f[16]);
      m.retry_drops_dl = std::stoll(f[17]);
      m.proactive_drops_dl = std::stoll(f[18]);
      m.residual_dl = std::stoll(f[19]);
      m.generated_ul = std::stoll(f[20]);
      m.delivered_ul = std::stoll(f[21]);
      m.retry_drops_ul = std::stoll(f[22]);
      m.proactive_drops_ul = std::stoll(f[23]);
      m.residual_ul = std::stoll(f[24]);
      m.delivered_fraction_dl = std::stod(f[25]);
      m.delivered_fraction_ul = std::stod(f[26]);
      m.rmse_dl_cm[0] = std::stod(f[27]);
      m.rmse_dl_cm[1] = std::stod(f[28]);
      m.rmse_dl_cm[2] = std::stod(f[29]);
      m.rmse_ul_cm[0] = std::stod(f[30]);
      m.rmse_cm = m.rmse_dl_cm[0];
      m.attempts = std::stoll(f[31]);
      m.attempts_collided = std::stoll(f[32]);
      m.max_first_attempt_wait = std::stoll(f[33]);
      m.medium_busy = std::stoll(f[34]);
      result.rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw ConfigError("sweep file " + path + ": malformed row at line " +
                        std::to_string(line_no));
    }
  }
  return result;
}

void emit_plotdata(const SweepResult& sweep, const std::string& kind,
                   std::ostream& out) {
  const auto aggregates = aggregate_sweep(sweep);
  if (aggregates.empty()) {
    throw ConfigError("sweep holds no successful runs to plot");
  }
  if (kind == "latency_ampdu") {
    out << "sta_count,discipline,worst_dl_ms,worst_ul_ms,worst_rtt_ms,"
           "mean_ampdu_dl,mean_ampdu_ul\n";
    for (const SweepAggregate& a : aggregates) {
      out << a.sta_count << ',' << discipline_name(a.discipline) << ','
          << fmt(a.worst_dl_ms) << ',' << fmt(a.worst_ul_ms) << ','
          << fmt(a.worst_rtt_ms) << ',' << fmt(a.mean_ampdu_dl) << ','
          << fmt(a.mean_ampdu_ul) << '\n';
    }
  } else if (kind == "rmse_fraction") {
    out << "sta_count,discipline,delivered_fraction,rmse_cm\n";
    for (const SweepAggregate& a : aggregates) {
      out << a.sta_count << ',' << discipline_name(a.discipline) << ','
          << fmt(a.delivered_fraction_dl) << ',' << fmt(a.rmse_cm) << '\n';
    }
  } else {
    throw ConfigError("unknown plot kind '" + kind +
                      "' (expected latency_ampdu or rmse_fraction)");
  }
}

}  // namespace tiwifi
