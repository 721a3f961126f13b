/* memcell: multilevel memristive memory-cell simulator.
 *
 * C interface to the simulation core. All entry points are thread-safe as
 * long as each handle is used from one thread at a time. Functions return
 * MC_OK or an error status; when an `err` buffer is supplied it receives a
 * NUL-terminated diagnostic on failure (truncated to errlen).
 */
#ifndef MEMCELL_H
#define MEMCELL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define MC_OK 0
#define MC_ERR_CONFIG 1     /* bad key, value, pattern, or input data */
#define MC_ERR_SIMULATION 2 /* solver or integration failure */

const char *mc_version(void);

typedef struct mc_config mc_config;
typedef struct mc_level_table mc_level_table;
typedef struct mc_gap_list mc_gap_list;
typedef struct mc_sens_report mc_sens_report;
typedef struct mc_topo_report mc_topo_report;

/* ---------- configuration ---------- */

/* Fresh config holding the stock three-sub-cell defaults. Never fails. */
mc_config *mc_config_create(void);

/* Parse a key = value config file ('#' starts a comment). Returns NULL and
 * fills err on any unknown key, malformed value, or invariant violation;
 * diagnostics carry the offending line number. */
mc_config *mc_config_load(const char *path, char *err, size_t errlen);

int mc_config_set(mc_config *, const char *key, const char *value,
                  char *err, size_t errlen);

/* Re-check cross-field invariants (also done by every consumer). */
int mc_config_validate(const mc_config *, char *err, size_t errlen);

/* Render the fully resolved snapshot (every key, defaults included) as
 * config-file text. Returns the length required excluding the NUL, or -1
 * on error; writes at most buflen-1 bytes when buf is non-NULL. Resolves
 * mobility_factor = auto to its calibrated numeric value. */
int mc_config_render(const mc_config *, char *buf, size_t buflen,
                     char *err, size_t errlen);

void mc_config_free(mc_config *);

/* ---------- single device ---------- */

int mc_memristance(const mc_config *, double x, double *ohms,
                   char *err, size_t errlen);
int mc_window(double x, int exponent, double *out, char *err, size_t errlen);
int mc_drift_rate(const mc_config *, double x, double volts,
                  double *rate, char *err, size_t errlen);
int mc_device_step(const mc_config *, double x, double volts, double dt_s,
                   double *x_out, char *err, size_t errlen);
int mc_state_for_resistance(const mc_config *, double ohms, double *x_out,
                            char *err, size_t errlen);
/* Drift gain that moves a bare device from_ohms -> to_ohms under one pulse
 * of the given amplitude and duration (bisection, 1e-6 relative). */
int mc_calibrate_drift(const mc_config *, double from_ohms, double to_ohms,
                       double amplitude_v, double duration_s,
                       double *gain, char *err, size_t errlen);

/* ---------- closed-form readout ---------- */

int mc_subcell_aux(double m_ohms, double r_ohms,
                   double *r1c, double *r2c, double *k,
                   char *err, size_t errlen);
/* n-sub-cell divider readout; m and r are arrays of length n. */
int mc_closed_form_vout(const double *m_ohms, const double *r_ohms, int n,
                        double r_load, double v_read, double *vout,
                        char *err, size_t errlen);

/* ---------- full cycles ---------- */

/* One reset/write/read cycle for a digit pattern ("021"). vout receives the
 * settled read value; final_x, when non-NULL, receives n device states. */
int mc_run_cycle(const mc_config *, const char *pattern, double *vout,
                 double *final_x, char *err, size_t errlen);

/* Same cycle, recording every solver step to csv_path. */
int mc_write_trace(const mc_config *, const char *pattern,
                   const char *csv_path, double *vout,
                   char *err, size_t errlen);

/* ---------- analysis ---------- */

/* mode: "closed-form" (bundled per-digit device states) or "transient". */
int mc_enumerate_levels(const mc_config *, const char *mode,
                        mc_level_table **out, char *err, size_t errlen);
int mc_level_count(const mc_level_table *);
int mc_level_row(const mc_level_table *, int index,
                 char *pattern, size_t patlen, double *vout);
int mc_count_distinct(const mc_level_table *, double epsilon_rel);
int mc_level_table_write_csv(const mc_level_table *, const char *path,
                             char *err, size_t errlen);
void mc_level_table_free(mc_level_table *);

/* Gaps between value-adjacent rows of the descending-sorted table. */
int mc_adjacent_gaps(const mc_level_table *, mc_gap_list **out,
                     char *err, size_t errlen);
/* The top_k smallest nonzero gaps, ascending. */
int mc_closest_pairs(const mc_level_table *, int top_k, mc_gap_list **out,
                     char *err, size_t errlen);
int mc_gap_count(const mc_gap_list *);
int mc_gap_row(const mc_gap_list *, int index,
               char *pattern_hi, size_t hilen,
               char *pattern_lo, size_t lolen, double *pct);
int mc_gap_list_write_csv(const mc_gap_list *, const char *path,
                          char *err, size_t errlen);
int mc_histogram_write_csv(const mc_gap_list *, double bin_width_pct,
                           const char *path, char *err, size_t errlen);
void mc_gap_list_free(mc_gap_list *);

/* Write-amplitude perturbation study. sampling: "corners" (all sign
 * combinations of (1 +/- delta) over nonzero digits; `samples` ignored) or
 * "monte-carlo" (uniform factors in [1-delta, 1+delta], seeded). */
int mc_sensitivity(const mc_config *, double delta, const char *sampling,
                   int samples, unsigned long long seed,
                   mc_sens_report **out, char *err, size_t errlen);
int mc_sens_count(const mc_sens_report *);
int mc_sens_row(const mc_sens_report *, int index,
                char *pattern, size_t patlen,
                double *mean_pct, double *std_pct, int *sample_count);
/* Unweighted average over patterns and its population spread. */
int mc_sens_average(const mc_sens_report *, double *mean_pct, double *std_pct);
int mc_sens_write_csv(const mc_sens_report *, const char *path,
                      char *err, size_t errlen);
void mc_sens_report_free(mc_sens_report *);

/* Enumerate sub-cell wirings with the given resistor count and rank them by
 * worst-case deviation from the closed-form readout over `samples` random
 * device/resistor draws. */
int mc_topology_search(const mc_config *, int resistor_count, int samples,
                       unsigned long long seed, mc_topo_report **out,
                       char *err, size_t errlen);
int mc_topo_candidate_count(const mc_topo_report *);
int mc_topo_exact_count(const mc_topo_report *); /* deviation <= 1e-9 */
int mc_topo_row(const mc_topo_report *, int index,
                char *edges, size_t edgeslen, double *max_rel_dev);
int mc_topo_write_csv(const mc_topo_report *, const char *path,
                      char *err, size_t errlen);
void mc_topo_report_free(mc_topo_report *);

#ifdef __cplusplus
}
#endif

#endif /* MEMCELL_H */
