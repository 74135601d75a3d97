#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "error.hpp"

namespace tiwifi {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    out.push_back(trim(item));
  }
  return out;
}

std::int64_t parse_int(const std::string& v, const std::string& key) {
  std::int64_t value = 0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + v +
                      "'");
  }
  return value;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v +
                      "'");
  }
}

// Integer lists accept comma elements and inclusive a..b ranges.
template <typename T>
std::vector<T> parse_int_list(const std::string& v, const std::string& key) {
  std::vector<T> out;
  for (const std::string& item : split(v, ',')) {
    if (item.empty()) {
      throw ConfigError("key '" + key + "': empty list element");
    }
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const std::int64_t lo = parse_int(trim(item.substr(0, dots)), key);
      const std::int64_t hi = parse_int(trim(item.substr(dots + 2)), key);
      if (lo > hi) {
        throw ConfigError("key '" + key + "': descending range " + item);
      }
      for (std::int64_t x = lo; x <= hi; ++x) {
        out.push_back(static_cast<T>(x));
      }
    } else {
      out.push_back(static_cast<T>(parse_int(item, key)));
    }
  }
  return out;
}

// Field registry: one setter + one getter per key keeps parse and serialize
// from drifting apart.
struct Field {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)>
      set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
std::string join_ints(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(15);
  ss << v;
  return ss.str();
}

const std::map<std::string, Field>& field_registry() {
  static const std::map<std::string, Field> fields = [] {
    std::map<std::string, Field> f;
    auto int_field = [&f](const std::string& key, std::int64_t ExperimentConfig::*member) {
      f[key] = Field{
          [member](ExperimentConfig& c, const std::string& k,
                   const std::string& v) { c.*member = parse_int(v, k); },
          [member](const ExperimentConfig& c) {
            return std::to_string(c.*member);
          }};
    };
    auto int32_field = [&f](const std::string& key, int ExperimentConfig::*member) {
      f[key] = Field{
          [member](ExperimentConfig& c, const std::string& k,
                   const std::string& v) {
            c.*member = static_cast<int>(parse_int(v, k));
          },
          [member](const ExperimentConfig& c) {
            return std::to_string(c.*member);
          }};
    };
    auto double_field = [&f](const std::string& key, double ExperimentConfig::*member) {
      f[key] = Field{
          [member](ExperimentConfig& c, const std::string& k,
                   const std::string& v) { c.*member = parse_double(v, k); },
          [member](const ExperimentConfig& c) {
            return format_double(c.*member);
          }};
    };
    auto string_field = [&f](const std::string& key, std::string ExperimentConfig::*member) {
      f[key] = Field{
          [member](ExperimentConfig& c, const std::string&,
                   const std::string& v) { c.*member = v; },
          [member](const ExperimentConfig& c) { return c.*member; }};
    };

    f["run.sta_counts"] = Field{
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.sta_counts = parse_int_list<int>(v, k);
        },
        [](const ExperimentConfig& c) { return join_ints(c.sta_counts); }};
    f["run.disciplines"] = Field{
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.disciplines.clear();
          for (const std::string& name : split(v, ',')) {
            auto d = parse_discipline(name);
            if (!d) {
              throw ConfigError("key '" + k + "': unknown discipline '" +
                                name + "'");
            }
            c.disciplines.push_back(*d);
          }
        },
        [](const ExperimentConfig& c) {
          std::string s;
          for (std::size_t i = 0; i < c.disciplines.size(); ++i) {
            if (i) s += ',';
            s += discipline_name(c.disciplines[i]);
          }
          return s;
        }};
    f["run.seeds"] = Field{
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.seeds = parse_int_list<std::uint64_t>(v, k);
        },
        [](const ExperimentConfig& c) { return join_ints(c.seeds); }};
    int_field("run.duration_ms", &ExperimentConfig::duration_ms);
    int_field("run.warmup_ms", &ExperimentConfig::warmup_ms);
    string_field("run.out_dir", &ExperimentConfig::out_dir);

    int_field("traffic.per_sta_rate_bps", &ExperimentConfig::per_sta_rate_bps);
    int_field("traffic.sampling_hz", &ExperimentConfig::sampling_hz);
    string_field("traffic.trace_source", &ExperimentConfig::trace_source);
    string_field("traffic.trace_csv", &ExperimentConfig::trace_csv);
    int32_field("traffic.motion_components",
                &ExperimentConfig::motion_components);
    double_field("traffic.motion_min_hz", &ExperimentConfig::motion_min_hz);
    double_field("traffic.motion_max_hz", &ExperimentConfig::motion_max_hz);
    double_field("traffic.motion_p99_cm", &ExperimentConfig::motion_p99_cm);
    double_field("traffic.motion_max_cm", &ExperimentConfig::motion_max_cm);
    int_field("traffic.stagger_ns", &ExperimentConfig::stagger_ns);

    int32_field("phy.tones_full", &ExperimentConfig::tones_full);
    int32_field("phy.tones_half", &ExperimentConfig::tones_half);
    int32_field("phy.tones_quarter", &ExperimentConfig::tones_quarter);
    int_field("phy.preamble_us", &ExperimentConfig::preamble_us);
    int_field("phy.back_us", &ExperimentConfig::back_us);
    int_field("phy.trigger_us", &ExperimentConfig::trigger_us);
    int_field("phy.max_ppdu_us", &ExperimentConfig::max_ppdu_us);
    int_field("phy.sifs_us", &ExperimentConfig::sifs_us);
    int_field("phy.slot_us", &ExperimentConfig::slot_us);
    int_field("phy.aifs_us", &ExperimentConfig::aifs_us);

    int32_field("mac.cw_min", &ExperimentConfig::cw_min);
    int32_field("mac.cw_max", &ExperimentConfig::cw_max);
    int32_field("mac.retry_limit", &ExperimentConfig::retry_limit);
    int_field("mac.mpdu_overhead_bytes",
              &ExperimentConfig::mpdu_overhead_bytes);
    int_field("mac.txop_budget_us", &ExperimentConfig::txop_budget_us);
    return f;
  }();
  return fields;
}

// Serialization order: sections as documented, keys in registry order within
// each section.
const std::vector<std::string>& section_order() {
  static const std::vector<std::string> sections = {"run", "traffic", "phy",
                                                    "mac"};
  return sections;
}

}  // namespace

PhyParams ExperimentConfig::phy_params() const {
  PhyParams phy;
  phy.tones.data_tones_full = tones_full;
  phy.tones.data_tones_half = tones_half;
  phy.tones.data_tones_quarter = tones_quarter;
  phy.budget.preamble = preamble_us * kMicrosecond;
  phy.budget.back_duration = back_us * kMicrosecond;
  phy.budget.trigger_duration = trigger_us * kMicrosecond;
  phy.budget.max_ppdu_duration = max_ppdu_us * kMicrosecond;
  phy.budget.sifs = sifs_us * kMicrosecond;
  return phy;
}

MacParams ExperimentConfig::mac_params() const {
  MacParams mac;
  mac.cw_min = cw_min;
  mac.cw_max = cw_max;
  mac.retry_limit = retry_limit;
  mac.slot = slot_us * kMicrosecond;
  mac.aifs = aifs_us * kMicrosecond;
  mac.mpdu_overhead_bytes = mpdu_overhead_bytes;
  mac.mpdu_payload_bytes = payload_bytes();
  mac.sampling_period = sampling_period();
  mac.txop_budget = txop_budget_us * kMicrosecond;
  mac.nobus_queue_wait_cap = sampling_period();
  return mac;
}

void ExperimentConfig::validate() const {
  if (sta_counts.empty()) {
    throw ConfigError("run.sta_counts must not be empty");
  }
  for (int n : sta_counts) {
    if (n < 1) throw ConfigError("run.sta_counts entries must be >= 1");
  }
  if (disciplines.empty()) {
    throw ConfigError("run.disciplines must not be empty");
  }
  if (seeds.empty()) {
    throw ConfigError("run.seeds must not be empty");
  }
  if (duration_ms <= 0) {
    throw ConfigError("run.duration_ms must be positive");
  }
  if (warmup_ms < 0 || warmup_ms >= duration_ms) {
    throw ConfigError("run.warmup_ms must be in [0, duration_ms)");
  }
  if (sampling_hz <= 0 || kSecond % sampling_hz != 0) {
    throw ConfigError("traffic.sampling_hz must divide 1e9 ns evenly");
  }
  if (duration_ms * sampling_hz % 1000 != 0) {
    throw ConfigError("run.duration_ms must cover whole sampling ticks");
  }
  if (per_sta_rate_bps <= 0 ||
      per_sta_rate_bps % (8 * sampling_hz) != 0) {
    throw ConfigError(
        "traffic.per_sta_rate_bps must be a whole number of bytes per "
        "sample (rate = payload * 8 * sampling_hz exactly)");
  }
  if (trace_source != "synthetic" && trace_source != "csv") {
    throw ConfigError("traffic.trace_source must be 'synthetic' or 'csv'");
  }
  if (trace_source == "csv" && trace_csv.empty()) {
    throw ConfigError("traffic.trace_csv is required when trace_source=csv");
  }
  if (motion_components < 0) {
    throw ConfigError("traffic.motion_components must be >= 0");
  }
  if (motion_min_hz <= 0 || motion_max_hz < motion_min_hz) {
    throw ConfigError("traffic motion band must satisfy 0 < min <= max");
  }
  if (tones_quarter <= 0 || tones_half < tones_quarter ||
      tones_full < tones_half) {
    throw ConfigError("phy tone plan must satisfy 0 < quarter <= half <= full");
  }
  if (preamble_us <= 0 || max_ppdu_us <= preamble_us) {
    throw ConfigError("phy.preamble_us must be positive and below the cap");
  }
  if (sifs_us <= 0 || slot_us <= 0 || aifs_us <= 0 || back_us <= 0 ||
      trigger_us <= 0) {
    throw ConfigError("phy durations must be positive");
  }
  if (cw_min < 0 || cw_max < cw_min) {
    throw ConfigError("mac contention windows must satisfy 0 <= min <= max");
  }
  if (retry_limit < 0) {
    throw ConfigError("mac.retry_limit must be >= 0");
  }
  if (mpdu_overhead_bytes < 0) {
    throw ConfigError("mac.mpdu_overhead_bytes must be >= 0");
  }
  if (txop_budget_us < 0) {
    throw ConfigError("mac.txop_budget_us must be >= 0");
  }
  if (stagger_ns < 0 || stagger_ns * 64 > sampling_period()) {
    throw ConfigError("traffic.stagger_ns too large for the sampling period");
  }
  // A single MPDU must fit the PPDU cap on the narrowest RU.
  const PhyParams phy = phy_params();
  if (max_ampdu_mpdus(payload_bytes() + mpdu_overhead_bytes,
                      tones_quarter, phy.budget, phy.mcs) < 1) {
    throw ConfigError("one MPDU does not fit the PPDU duration cap");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') {
      continue;
    }
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unterminated section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      bool known = false;
      for (const auto& s : section_order()) known = known || s == section;
      if (!known) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": key outside any section");
    }
    const std::string key = section + "." + trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    const auto& fields = field_registry();
    auto it = fields.find(key);
    if (it == fields.end()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
    it->second.set(config, key, value);
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  const auto& fields = field_registry();
  for (const std::string& section : section_order()) {
    out << '[' << section << "]\n";
    for (const auto& [key, field] : fields) {
      if (key.rfind(section + ".", 0) == 0) {
        out << key.substr(section.size() + 1) << " = " << field.get(config)
            << '\n';
      }
    }
    out << '\n';
  }
  return out.str();
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment +
                      "' must look like section.key=value");
  }
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto& fields = field_registry();
  auto it = fields.find(key);
  if (it == fields.end()) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  it->second.set(config, key, value);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

}  // namespace tiwifi
