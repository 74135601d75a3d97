/*
 * tiwifi - discrete-event simulator of a WiFi-7 BSS carrying Tactile
 * Internet traffic, with vanilla (aggregating) and nobus (depth-one)
 * MAC queue disciplines.
 *
 * C API over the simulator core. All functions returning int use the
 * tw_status codes below; on failure tw_last_error() describes the cause.
 * Objects are opaque handles owned by the library; every *_free is safe
 * on NULL.
 */

#ifndef TIWIFI_H
#define TIWIFI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum tw_status {
  TW_OK = 0,
  TW_ERR_INVALID_ARG = 1,
  TW_ERR_CONFIG = 2,
  TW_ERR_IO = 3,
  TW_ERR_RUN = 4
};

typedef struct tw_config tw_config; /* experiment configuration */
typedef struct tw_result tw_result; /* one finished simulation run */
typedef struct tw_sweep tw_sweep;   /* a grid of finished runs */

/* Headline metrics of a single run. Latencies are in nanoseconds. */
typedef struct tw_run_metrics {
  int32_t sta_count;
  char discipline[16];
  uint64_t seed;
  int64_t worst_dl_ns;
  int64_t worst_ul_ns;
  int64_t worst_rtt_ns;
  int64_t p99_dl_ns;
  int64_t p99_ul_ns;
  double mean_ampdu_dl;
  double mean_ampdu_ul;
  double delivered_fraction_dl;
  double delivered_fraction_ul;
  double rmse_cm;         /* plot axis: x of the teleoperator-side RMSE */
  double rmse_xyz_cm[3];  /* teleoperator-side RMSE per axis */
  int64_t generated_dl, delivered_dl;
  int64_t generated_ul, delivered_ul;
  int64_t retry_drops_dl, proactive_drops_dl;
  int64_t retry_drops_ul, proactive_drops_ul;
  int64_t attempts, attempts_collided;
  double collision_probability;
  int64_t max_first_attempt_wait_ns;
} tw_run_metrics;

const char* tw_version(void);
/* Message for the most recent failure on this thread. */
const char* tw_last_error(void);
void tw_string_free(char* s);

/* Configuration ---------------------------------------------------------- */

int tw_config_default(tw_config** out);
int tw_config_load(const char* path, tw_config** out);
int tw_config_parse(const char* text, tw_config** out);
/* assignment is "section.key=value", e.g. "run.duration_ms=2000". */
int tw_config_set(tw_config* cfg, const char* assignment);
int tw_config_get(const tw_config* cfg, const char* key, char* buf,
                  size_t buflen);
/* Canonical serialization; caller frees the string with tw_string_free. */
char* tw_config_serialize(const tw_config* cfg);
int tw_config_write(const tw_config* cfg, const char* path);
/* Validates without running; TW_OK when the configuration is usable. */
int tw_config_validate(const tw_config* cfg);
void tw_config_free(tw_config* cfg);

/* Single run -------------------------------------------------------------- */

/*
 * Runs one simulation. sta_count <= 0, discipline == NULL, or seed == NULL
 * fall back to the first entry of the corresponding config list.
 */
int tw_simulate(const tw_config* cfg, int sta_count, const char* discipline,
                const uint64_t* seed, tw_result** out);
int tw_result_metrics(const tw_result* res, tw_run_metrics* out);
int tw_result_write_summary_csv(const tw_result* res, const char* path);
/* Per-sample log: flow,seq,generated_at,enqueued_at,received_at,
 * displayed_at,outcome (times in integer nanoseconds, -1 when absent). */
int tw_result_write_event_log_csv(const tw_result* res, const char* path);
void tw_result_free(tw_result* res);

/* Sweeps ------------------------------------------------------------------ */

typedef void (*tw_progress_fn)(const char* row_description, void* user);

int tw_run_sweep(const tw_config* cfg, tw_progress_fn progress, void* user,
                 tw_sweep** out);
int tw_sweep_load_raw_csv(const char* path, tw_sweep** out);
int tw_sweep_row_count(const tw_sweep* sw);
int tw_sweep_write_raw_csv(const tw_sweep* sw, const char* path);
int tw_sweep_write_agg_csv(const tw_sweep* sw, const char* path);
/* kind is "latency_ampdu" or "rmse_fraction". */
int tw_sweep_emit_plotdata(const tw_sweep* sw, const char* kind,
                           const char* path);
void tw_sweep_free(tw_sweep* sw);

#ifdef __cplusplus
}
#endif

#endif /* TIWIFI_H */
