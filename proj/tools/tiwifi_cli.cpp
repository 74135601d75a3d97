// Experiment front-end: single runs, STA-density sweeps, and plot-data
// emission. Talks to the simulator exclusively through the tiwifi C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tiwifi.h"

namespace {

struct ConfigGuard {
  tw_config* cfg = nullptr;
  ~ConfigGuard() { tw_config_free(cfg); }
};

struct ResultGuard {
  tw_result* res = nullptr;
  ~ResultGuard() { tw_result_free(res); }
};

struct SweepGuard {
  tw_sweep* sw = nullptr;
  ~SweepGuard() { tw_sweep_free(sw); }
};

[[noreturn]] void die(const std::string& context) {
  std::fprintf(stderr, "tiwifi: %s: %s\n", context.c_str(), tw_last_error());
  std::exit(1);
}

int load_config(const std::string& path, const std::vector<std::string>& sets,
                tw_config** out) {
  int rc = path.empty() ? tw_config_default(out) : tw_config_load(path.c_str(), out);
  if (rc != TW_OK) return rc;
  for (const std::string& s : sets) {
    rc = tw_config_set(*out, s.c_str());
    if (rc != TW_OK) return rc;
  }
  return tw_config_validate(*out);
}

std::string config_value(const tw_config* cfg, const char* key) {
  char buf[512];
  if (tw_config_get(cfg, key, buf, sizeof(buf)) != TW_OK) {
    die(std::string("reading ") + key);
  }
  return buf;
}

std::string resolve_out_dir(const tw_config* cfg, const std::string& cli_dir) {
  if (!cli_dir.empty()) return cli_dir;
  if (const char* env = std::getenv("TIWIFI_OUT_DIR"); env && env[0]) {
    return env;
  }
  return config_value(cfg, "run.out_dir");
}

void dump_effective_config(const tw_config* cfg, const std::string& dir) {
  const std::string path = dir + "/effective_config.ini";
  if (tw_config_write(cfg, path.c_str()) != TW_OK) {
    die("writing " + path);
  }
}

void progress_printer(const char* line, void*) {
  std::printf("  %s\n", line);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WiFi-7 Tactile Internet BSS simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir_flag;
  app.add_option("--config", config_path, "experiment config file (ini)");
  app.add_option("--set", sets, "override, e.g. --set mac.cw_max=15");
  app.add_option("--out-dir", out_dir_flag, "output directory override");

  auto* simulate = app.add_subcommand("simulate", "run one simulation");
  int stas = 0;
  std::string discipline;
  std::uint64_t seed = 0;
  bool have_seed = false;
  double duration_s = 0.0;
  simulate->add_option("--stas", stas, "number of teleoperator STAs");
  simulate->add_option("--discipline", discipline, "vanilla | nobus");
  simulate->add_option("--seed", seed, "run seed")->each([&](const std::string&) {
    have_seed = true;
  });
  simulate->add_option("--duration", duration_s, "run duration in seconds");

  auto* sweep = app.add_subcommand("sweep", "run the configured sweep grid");
  bool quiet = false;
  sweep->add_flag("--quiet", quiet, "suppress per-run progress");

  auto* emit = app.add_subcommand("emit", "write plot data from a sweep");
  std::string kind;
  std::string sweep_file;
  emit->add_option("--kind", kind, "latency_ampdu | rmse_fraction")
      ->required();
  emit->add_option("--sweep-file", sweep_file,
                   "sweep_raw.csv to read (default <out-dir>/sweep_raw.csv)");

  CLI11_PARSE(app, argc, argv);

  ConfigGuard cfg;
  if (duration_s > 0.0) {
    sets.push_back("run.duration_ms=" +
                   std::to_string(static_cast<long long>(duration_s * 1000.0 + 0.5)));
  }
  if (load_config(config_path, sets, &cfg.cfg) != TW_OK) {
    die("loading configuration");
  }
  const std::string out_dir = resolve_out_dir(cfg.cfg, out_dir_flag);
  std::filesystem::create_directories(out_dir);

  if (simulate->parsed()) {
    ResultGuard result;
    if (tw_simulate(cfg.cfg, stas, discipline.empty() ? nullptr : discipline.c_str(),
                    have_seed ? &seed : nullptr, &result.res) != TW_OK) {
      die("simulate");
    }
    dump_effective_config(cfg.cfg, out_dir);
    const std::string summary = out_dir + "/run_summary.csv";
    const std::string log = out_dir + "/run_events.csv";
    if (tw_result_write_summary_csv(result.res, summary.c_str()) != TW_OK) {
      die("writing " + summary);
    }
    if (tw_result_write_event_log_csv(result.res, log.c_str()) != TW_OK) {
      die("writing " + log);
    }
    tw_run_metrics m;
    tw_result_metrics(result.res, &m);
    std::printf("%s stas=%d seed=%llu\n", m.discipline, m.sta_count,
                static_cast<unsigned long long>(m.seed));
    std::printf("  worst latency dl/ul/rtt: %.3f / %.3f / %.3f ms\n",
                m.worst_dl_ns / 1e6, m.worst_ul_ns / 1e6, m.worst_rtt_ns / 1e6);
    std::printf("  mean ampdu dl/ul: %.2f / %.2f\n", m.mean_ampdu_dl,
                m.mean_ampdu_ul);
    std::printf("  delivered dl/ul: %.4f / %.4f\n", m.delivered_fraction_dl,
                m.delivered_fraction_ul);
    std::printf("  rmse: %.4f cm\n", m.rmse_cm);
    std::printf("  wrote %s and %s\n", summary.c_str(), log.c_str());
    return 0;
  }

  if (sweep->parsed()) {
    SweepGuard sw;
    if (tw_run_sweep(cfg.cfg, quiet ? nullptr : progress_printer, nullptr,
                     &sw.sw) != TW_OK) {
      die("sweep");
    }
    dump_effective_config(cfg.cfg, out_dir);
    const std::string raw = out_dir + "/sweep_raw.csv";
    const std::string agg = out_dir + "/sweep_agg.csv";
    if (tw_sweep_write_raw_csv(sw.sw, raw.c_str()) != TW_OK) {
      die("writing " + raw);
    }
    if (tw_sweep_write_agg_csv(sw.sw, agg.c_str()) != TW_OK) {
      die("writing " + agg);
    }
    std::printf("%d runs -> %s, %s\n", tw_sweep_row_count(sw.sw), raw.c_str(),
                agg.c_str());
    return 0;
  }

  if (emit->parsed()) {
    const std::string source =
        sweep_file.empty() ? out_dir + "/sweep_raw.csv" : sweep_file;
    SweepGuard sw;
    if (tw_sweep_load_raw_csv(source.c_str(), &sw.sw) != TW_OK) {
      die("loading " + source);
    }
    const std::string path = out_dir + "/" + kind + ".csv";
    if (tw_sweep_emit_plotdata(sw.sw, kind.c_str(), path.c_str()) != TW_OK) {
      die("emit " + kind);
    }
    std::printf("wrote %s\n", path.c_str());
    return 0;
  }
  return 0;
}
