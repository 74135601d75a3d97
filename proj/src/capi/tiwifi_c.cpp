#include "tiwifi.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "config.hpp"
#include "error.hpp"
#include "metrics.hpp"
#include "simulation.hpp"
#include "sweep.hpp"

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const tiwifi::ConfigError*>(&e) != nullptr) {
    return TW_ERR_CONFIG;
  }
  return TW_ERR_RUN;
}

int write_text_file(const char* path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return fail(TW_ERR_IO, std::string("cannot open for writing: ") + path);
  }
  out << text;
  out.flush();
  if (!out) {
    return fail(TW_ERR_IO, std::string("write failed: ") + path);
  }
  return TW_OK;
}

}  // namespace

struct tw_config {
  tiwifi::ExperimentConfig cfg;
};

struct tw_result {
  tiwifi::RunMetrics metrics;
  std::string summary_csv;
  std::string event_log_csv;
};

struct tw_sweep {
  tiwifi::SweepResult sweep;
};

extern "C" {

const char* tw_version(void) { return "1.0.0"; }

const char* tw_last_error(void) { return g_last_error.c_str(); }

void tw_string_free(char* s) { delete[] s; }

int tw_config_default(tw_config** out) {
  if (out == nullptr) return fail(TW_ERR_INVALID_ARG, "out is NULL");
  *out = new tw_config{};
  return TW_OK;
}

int tw_config_load(const char* path, tw_config** out) {
  if (path == nullptr || out == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "path/out is NULL");
  }
  try {
    auto* handle = new tw_config{tiwifi::load_config_file(path)};
    *out = handle;
    return TW_OK;
  } catch (const std::exception& e) {
    return fail(TW_ERR_CONFIG, e.what());
  }
}

int tw_config_parse(const char* text, tw_config** out) {
  if (text == nullptr || out == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "text/out is NULL");
  }
  try {
    auto* handle = new tw_config{tiwifi::parse_config(text)};
    *out = handle;
    return TW_OK;
  } catch (const std::exception& e) {
    return fail(TW_ERR_CONFIG, e.what());
  }
}

int tw_config_set(tw_config* cfg, const char* assignment) {
  if (cfg == nullptr || assignment == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "cfg/assignment is NULL");
  }
  try {
    tiwifi::apply_override(cfg->cfg, assignment);
    return TW_OK;
  } catch (const std::exception& e) {
    return fail(TW_ERR_CONFIG, e.what());
  }
}

int tw_config_get(const tw_config* cfg, const char* key, char* buf,
                  size_t buflen) {
  if (cfg == nullptr || key == nullptr || buf == nullptr || buflen == 0) {
    return fail(TW_ERR_INVALID_ARG, "cfg/key/buf is NULL");
  }
  // Serialize and scan; the registry is not exposed beyond the core.
  const std::string text = tiwifi::serialize_config(cfg->cfg);
  const std::string want(key);
  const auto dot = want.find('.');
  if (dot == std::string::npos) {
    return fail(TW_ERR_INVALID_ARG, "key must be section.name");
  }
  const std::string section = "[" + want.substr(0, dot) + "]";
  const std::string name = want.substr(dot + 1);
  std::istringstream in(text);
  std::string line;
  bool in_section = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '[') {
      in_section = line == section;
      continue;
    }
    if (!in_section) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    if (line.substr(0, eq) == name) {
      const std::string value = line.substr(eq + 3);
      if (value.size() + 1 > buflen) {
        return fail(TW_ERR_INVALID_ARG, "buffer too small");
      }
      std::memcpy(buf, value.c_str(), value.size() + 1);
      return TW_OK;
    }
  }
  return fail(TW_ERR_CONFIG, "unknown config key '" + want + "'");
}

char* tw_config_serialize(const tw_config* cfg) {
  if (cfg == nullptr) return nullptr;
  const std::string text = tiwifi::serialize_config(cfg->cfg);
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

int tw_config_write(const tw_config* cfg, const char* path) {
  if (cfg == nullptr || path == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "cfg/path is NULL");
  }
  return write_text_file(path, tiwifi::serialize_config(cfg->cfg));
}

int tw_config_validate(const tw_config* cfg) {
  if (cfg == nullptr) return fail(TW_ERR_INVALID_ARG, "cfg is NULL");
  try {
    cfg->cfg.validate();
    return TW_OK;
  } catch (const std::exception& e) {
    return fail(TW_ERR_CONFIG, e.what());
  }
}

void tw_config_free(tw_config* cfg) { delete cfg; }

int tw_simulate(const tw_config* cfg, int sta_count, const char* discipline,
                const uint64_t* seed, tw_result** out) {
  if (cfg == nullptr || out == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "cfg/out is NULL");
  }
  try {
    const tiwifi::ExperimentConfig& c = cfg->cfg;
    c.validate();
    const int stas = sta_count > 0 ? sta_count : c.sta_counts.front();
    tiwifi::Discipline d = c.disciplines.front();
    if (discipline != nullptr && discipline[0] != '\0') {
      auto parsed = tiwifi::parse_discipline(discipline);
      if (!parsed) {
        return fail(TW_ERR_CONFIG,
                    std::string("unknown discipline '") + discipline + "'");
      }
      d = *parsed;
    }
    const std::uint64_t s = seed != nullptr ? *seed : c.seeds.front();

    tiwifi::Simulation sim(c, stas, d, s);
    auto* res = new tw_result{};
    res->metrics = sim.run();
    std::ostringstream summary;
    tiwifi::write_run_summary_csv(res->metrics, summary);
    res->summary_csv = summary.str();
    std::ostringstream log;
    sim.collector().write_event_log_csv(log);
    res->event_log_csv = log.str();
    *out = res;
    return TW_OK;
  } catch (const std::exception& e) {
    return fail(classify(e), e.what());
  }
}

int tw_result_metrics(const tw_result* res, tw_run_metrics* out) {
  if (res == nullptr || out == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "res/out is NULL");
  }
  const tiwifi::RunMetrics& m = res->metrics;
  std::memset(out, 0, sizeof(*out));
  out->sta_count = m.sta_count;
  std::snprintf(out->discipline, sizeof(out->discipline), "%s",
                tiwifi::discipline_name(m.discipline));
  out->seed = m.seed;
  out->worst_dl_ns = m.latency_dl.worst;
  out->worst_ul_ns = m.latency_ul.worst;
  out->worst_rtt_ns = m.worst_rtt();
  out->p99_dl_ns = m.latency_dl.p99;
  out->p99_ul_ns = m.latency_ul.p99;
  out->mean_ampdu_dl = m.mean_ampdu_dl;
  out->mean_ampdu_ul = m.mean_ampdu_ul;
  out->delivered_fraction_dl = m.delivered_fraction_dl;
  out->delivered_fraction_ul = m.delivered_fraction_ul;
  out->rmse_cm = m.rmse_cm;
  for (int axis = 0; axis < 3; ++axis) {
    out->rmse_xyz_cm[axis] = m.rmse_dl_cm[axis];
  }
  out->generated_dl = m.generated_dl;
  out->delivered_dl = m.delivered_dl;
  out->generated_ul = m.generated_ul;
  out->delivered_ul = m.delivered_ul;
  out->retry_drops_dl = m.retry_drops_dl;
  out->proactive_drops_dl = m.proactive_drops_dl;
  out->retry_drops_ul = m.retry_drops_ul;
  out->proactive_drops_ul = m.proactive_drops_ul;
  out->attempts = m.attempts;
  out->attempts_collided = m.attempts_collided;
  out->collision_probability = m.collision_probability;
  out->max_first_attempt_wait_ns = m.max_first_attempt_wait;
  return TW_OK;
}

int tw_result_write_summary_csv(const tw_result* res, const char* path) {
  if (res == nullptr || path == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "res/path is NULL");
  }
  return write_text_file(path, res->summary_csv);
}

int tw_result_write_event_log_csv(const tw_result* res, const char* path) {
  if (res == nullptr || path == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "res/path is NULL");
  }
  return write_text_file(path, res->event_log_csv);
}

void tw_result_free(tw_result* res) { delete res; }

int tw_run_sweep(const tw_config* cfg, tw_progress_fn progress, void* user,
                 tw_sweep** out) {
  if (cfg == nullptr || out == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "cfg/out is NULL");
  }
  try {
    tiwifi::ProgressFn fn;
    if (progress != nullptr) {
      fn = [progress, user](const tiwifi::SweepRow& row) {
        std::ostringstream ss;
        ss << tiwifi::discipline_name(row.discipline) << " stas="
           << row.sta_count << " seed=" << row.seed
           << (row.failed ? " FAILED: " + row.error : " ok");
        progress(ss.str().c_str(), user);
      };
    }
    auto* sw = new tw_sweep{tiwifi::run_sweep(cfg->cfg, fn)};
    *out = sw;
    return TW_OK;
  } catch (const std::exception& e) {
    return fail(classify(e), e.what());
  }
}

int tw_sweep_load_raw_csv(const char* path, tw_sweep** out) {
  if (path == nullptr || out == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "path/out is NULL");
  }
  try {
    auto* sw = new tw_sweep{tiwifi::load_sweep_raw_csv(path)};
    *out = sw;
    return TW_OK;
  } catch (const std::exception& e) {
    return fail(TW_ERR_IO, e.what());
  }
}

int tw_sweep_row_count(const tw_sweep* sw) {
  return sw == nullptr ? 0 : static_cast<int>(sw->sweep.rows.size());
}

int tw_sweep_write_raw_csv(const tw_sweep* sw, const char* path) {
  if (sw == nullptr || path == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "sweep/path is NULL");
  }
  std::ostringstream ss;
  tiwifi::write_sweep_raw_csv(sw->sweep, ss);
  return write_text_file(path, ss.str());
}

int tw_sweep_write_agg_csv(const tw_sweep* sw, const char* path) {
  if (sw == nullptr || path == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "sweep/path is NULL");
  }
  std::ostringstream ss;
  tiwifi::write_sweep_agg_csv(sw->sweep, ss);
  return write_text_file(path, ss.str());
}

int tw_sweep_emit_plotdata(const tw_sweep* sw, const char* kind,
                           const char* path) {
  if (sw == nullptr || kind == nullptr || path == nullptr) {
    return fail(TW_ERR_INVALID_ARG, "sweep/kind/path is NULL");
  }
  try {
    std::ostringstream ss;
    tiwifi::emit_plotdata(sw->sweep, kind, ss);
    return write_text_file(path, ss.str());
  } catch (const std::exception& e) {
    return fail(TW_ERR_CONFIG, e.what());
  }
}

void tw_sweep_free(tw_sweep* sw) { delete sw; }

}  // extern "C"
