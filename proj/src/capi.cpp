#include "memcell.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "analysis.h"
#include "cell.h"
#include "config.h"
#include "device.h"
#include "errors.h"
#include "readout.h"
#include "textio.h"

using namespace memcell;

struct mc_config {
    CellConfig cfg;
};
struct mc_level_table {
    LevelTable t;
};
struct mc_gap_list {
    std::vector<GapEntry> gaps;
};
struct mc_sens_report {
    SensReport r;
};
struct mc_topo_report {
    TopoReport r;
};

namespace {

void put_err(char *err, size_t errlen, const char *msg) {
    if (!err || errlen == 0)
        return;
    std::strncpy(err, msg, errlen - 1);
    err[errlen - 1] = '\0';
}

void put_str(const std::string &s, char *buf, size_t buflen) {
    if (!buf || buflen == 0)
        return;
    const size_t n = s.size() < buflen - 1 ? s.size() : buflen - 1;
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

// Runs fn, mapping exceptions onto status codes and the err buffer.
template <typename Fn>
int guarded(char *err, size_t errlen, Fn &&fn) {
    try {
        fn();
        return MC_OK;
    } catch (const ConfigError &e) {
        put_err(err, errlen, e.what());
        return MC_ERR_CONFIG;
    } catch (const SimulationError &e) {
        put_err(err, errlen, e.what());
        return MC_ERR_SIMULATION;
    } catch (const std::exception &e) {
        put_err(err, errlen, e.what());
        return MC_ERR_SIMULATION;
    }
}

const CellConfig &need(const mc_config *c) {
    if (!c)
        throw ConfigError("null config handle");
    return c->cfg;
}

} // namespace

extern "C" {

const char *mc_version(void) { return "1.0.0"; }

mc_config *mc_config_create(void) {
    return new (std::nothrow) mc_config{};
}

mc_config *mc_config_load(const char *path, char *err, size_t errlen) {
    mc_config *out = nullptr;
    const int st = guarded(err, errlen, [&] {
        if (!path)
            throw ConfigError("null path");
        CellConfig cfg = parse_config(read_file(path));
        out = new mc_config{std::move(cfg)};
    });
    return st == MC_OK ? out : nullptr;
}

int mc_config_set(mc_config *c, const char *key, const char *value,
                  char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!c)
            throw ConfigError("null config handle");
        if (!key || !value)
            throw ConfigError("null key or value");
        set_key(c->cfg, key, value);
    });
}

int mc_config_validate(const mc_config *c, char *err, size_t errlen) {
    return guarded(err, errlen, [&] { validate(need(c)); });
}

int mc_config_render(const mc_config *c, char *buf, size_t buflen,
                     char *err, size_t errlen) {
    int needed = -1;
    const int st = guarded(err, errlen, [&] {
        const std::string text = render_config(need(c));
        needed = static_cast<int>(text.size());
        if (buf && buflen > 0)
            put_str(text, buf, buflen);
    });
    return st == MC_OK ? needed : -1;
}

void mc_config_free(mc_config *c) { delete c; }

/* ---------- single device ---------- */

int mc_memristance(const mc_config *c, double x, double *ohms,
                   char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!ohms)
            throw ConfigError("null output pointer");
        const CellConfig &cfg = need(c);
        validate(cfg.device);
        *ohms = memristance(DeviceState{x, 0.0}, cfg.device);
    });
}

int mc_window(double x, int exponent, double *out, char *err,
              size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!out)
            throw ConfigError("null output pointer");
        if (exponent < 1)
            throw ConfigError("window exponent must be at least 1");
        *out = window(x, exponent);
    });
}

int mc_drift_rate(const mc_config *c, double x, double volts,
                  double *rate, char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!rate)
            throw ConfigError("null output pointer");
        const CellConfig &cfg = need(c);
        validate(cfg.device);
        *rate = drift_rate(DeviceState{x, 0.0}, volts, cfg.device);
    });
}

int mc_device_step(const mc_config *c, double x, double volts, double dt_s,
                   double *x_out, char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!x_out)
            throw ConfigError("null output pointer");
        if (!(dt_s > 0.0))
            throw ConfigError("dt must be positive");
        const CellConfig &cfg = need(c);
        validate(cfg.device);
        *x_out = step(DeviceState{x, 0.0}, volts, dt_s, cfg.device).x;
    });
}

int mc_state_for_resistance(const mc_config *c, double ohms, double *x_out,
                            char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!x_out)
            throw ConfigError("null output pointer");
        const CellConfig &cfg = need(c);
        validate(cfg.device);
        *x_out = state_for_resistance(ohms, cfg.device).x;
    });
}

int mc_calibrate_drift(const mc_config *c, double from_ohms, double to_ohms,
                       double amplitude_v, double duration_s,
                       double *gain, char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!gain)
            throw ConfigError("null output pointer");
        const CellConfig &cfg = need(c);
        *gain = calibrate_drift(cfg.device, from_ohms, to_ohms, amplitude_v,
                                duration_s);
    });
}

/* ---------- closed-form readout ---------- */

int mc_subcell_aux(double m_ohms, double r_ohms,
                   double *r1c, double *r2c, double *k,
                   char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!r1c || !r2c || !k)
            throw ConfigError("null output pointer");
        const SubcellAux aux = subcell_aux(m_ohms, r_ohms);
        *r1c = aux.r1c;
        *r2c = aux.r2c;
        *k = aux.k;
    });
}

int mc_closed_form_vout(const double *m_ohms, const double *r_ohms, int n,
                        double r_load, double v_read, double *vout,
                        char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!m_ohms || !r_ohms || !vout)
            throw ConfigError("null array or output pointer");
        if (n < 1)
            throw ConfigError("n must be at least 1");
        const std::vector<double> m(m_ohms, m_ohms + n);
        const std::vector<double> r(r_ohms, r_ohms + n);
        *vout = generalized_vout(m, r, r_load, v_read);
    });
}

/* ---------- full cycles ---------- */

int mc_run_cycle(const mc_config *c, const char *pattern, double *vout,
                 double *final_x, char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!pattern || !vout)
            throw ConfigError("null pattern or output pointer");
        const CellConfig &cfg = need(c);
        const WritePattern pat = WritePattern::parse(pattern, cfg);
        const CycleResult res = run_cycle(cfg, pat);
        *vout = res.v_out;
        if (final_x)
            for (size_t i = 0; i < res.final_states.size(); ++i)
                final_x[i] = res.final_states[i].x;
    });
}

int mc_write_trace(const mc_config *c, const char *pattern,
                   const char *csv_path, double *vout,
                   char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!pattern || !csv_path)
            throw ConfigError("null pattern or path");
        const CellConfig &cfg = need(c);
        const WritePattern pat = WritePattern::parse(pattern, cfg);
        Trace tr;
        const CycleResult res = run_cycle(cfg, pat, {}, &tr);
        tr.write_csv(csv_path);
        if (vout)
            *vout = res.v_out;
    });
}

/* ---------- analysis ---------- */

int mc_enumerate_levels(const mc_config *c, const char *mode,
                        mc_level_table **out, char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!mode || !out)
            throw ConfigError("null mode or output pointer");
        LevelMode lm;
        if (std::string(mode) == "closed-form")
            lm = LevelMode::ClosedForm;
        else if (std::string(mode) == "transient")
            lm = LevelMode::Transient;
        else
            throw ConfigError(
                "mode must be 'closed-form' or 'transient', got '" +
                std::string(mode) + "'");
        *out = new mc_level_table{enumerate_levels(need(c), lm)};
    });
}

int mc_level_count(const mc_level_table *t) {
    return t ? static_cast<int>(t->t.rows.size()) : -1;
}

int mc_level_row(const mc_level_table *t, int index,
                 char *pattern, size_t patlen, double *vout) {
    if (!t || index < 0 || index >= static_cast<int>(t->t.rows.size()))
        return MC_ERR_CONFIG;
    if (pattern)
        put_str(t->t.rows[index].pattern, pattern, patlen);
    if (vout)
        *vout = t->t.rows[index].v_out;
    return MC_OK;
}

int mc_count_distinct(const mc_level_table *t, double epsilon_rel) {
    if (!t)
        return -1;
    try {
        return count_distinct(t->t, epsilon_rel);
    } catch (const std::exception &) {
        return -1;
    }
}

int mc_level_table_write_csv(const mc_level_table *t, const char *path,
                             char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!t || !path)
            throw ConfigError("null table or path");
        write_level_csv(t->t, path);
    });
}

void mc_level_table_free(mc_level_table *t) { delete t; }

int mc_adjacent_gaps(const mc_level_table *t, mc_gap_list **out,
                     char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!t || !out)
            throw ConfigError("null table or output pointer");
        *out = new mc_gap_list{adjacent_gaps(t->t)};
    });
}

int mc_closest_pairs(const mc_level_table *t, int top_k, mc_gap_list **out,
                     char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!t || !out)
            throw ConfigError("null table or output pointer");
        *out = new mc_gap_list{closest_pairs(t->t, top_k)};
    });
}

int mc_gap_count(const mc_gap_list *g) {
    return g ? static_cast<int>(g->gaps.size()) : -1;
}

int mc_gap_row(const mc_gap_list *g, int index,
               char *pattern_hi, size_t hilen,
               char *pattern_lo, size_t lolen, double *pct) {
    if (!g || index < 0 || index >= static_cast<int>(g->gaps.size()))
        return MC_ERR_CONFIG;
    const GapEntry &e = g->gaps[index];
    if (pattern_hi)
        put_str(e.pattern_hi, pattern_hi, hilen);
    if (pattern_lo)
        put_str(e.pattern_lo, pattern_lo, lolen);
    if (pct)
        *pct = e.rel_pct;
    return MC_OK;
}

int mc_gap_list_write_csv(const mc_gap_list *g, const char *path,
                          char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!g || !path)
            throw ConfigError("null gap list or path");
        write_gap_csv(g->gaps, path);
    });
}

int mc_histogram_write_csv(const mc_gap_list *g, double bin_width_pct,
                           const char *path, char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!g || !path)
            throw ConfigError("null gap list or path");
        write_histogram_csv(histogram(g->gaps, bin_width_pct), path);
    });
}

void mc_gap_list_free(mc_gap_list *g) { delete g; }

int mc_sensitivity(const mc_config *c, double delta, const char *sampling,
                   int samples, unsigned long long seed,
                   mc_sens_report **out, char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!sampling || !out)
            throw ConfigError("null sampling or output pointer");
        SensSampling mode;
        if (std::string(sampling) == "corners")
            mode = SensSampling::Corners;
        else if (std::string(sampling) == "monte-carlo")
            mode = SensSampling::MonteCarlo;
        else
            throw ConfigError(
                "sampling must be 'corners' or 'monte-carlo', got '" +
                std::string(sampling) + "'");
        *out = new mc_sens_report{
            sensitivity(need(c), delta, mode, samples, seed)};
    });
}

int mc_sens_count(const mc_sens_report *r) {
    return r ? static_cast<int>(r->r.rows.size()) : -1;
}

int mc_sens_row(const mc_sens_report *r, int index,
                char *pattern, size_t patlen,
                double *mean_pct, double *std_pct, int *sample_count) {
    if (!r || index < 0 || index >= static_cast<int>(r->r.rows.size()))
        return MC_ERR_CONFIG;
    const SensRow &row = r->r.rows[index];
    if (pattern)
        put_str(row.pattern, pattern, patlen);
    if (mean_pct)
        *mean_pct = row.flagged ? std::nan("") : row.mean_pct;
    if (std_pct)
        *std_pct = row.flagged ? std::nan("") : row.std_pct;
    if (sample_count)
        *sample_count = static_cast<int>(row.flagged ? 0 : row.samples);
    return MC_OK;
}

int mc_sens_average(const mc_sens_report *r, double *mean_pct,
                    double *std_pct) {
    if (!r)
        return MC_ERR_CONFIG;
    if (mean_pct)
        *mean_pct = r->r.average_mean;
    if (std_pct)
        *std_pct = r->r.average_std;
    return MC_OK;
}

int mc_sens_write_csv(const mc_sens_report *r, const char *path,
                      char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!r || !path)
            throw ConfigError("null report or path");
        write_sensitivity_csv(r->r, path);
    });
}

void mc_sens_report_free(mc_sens_report *r) { delete r; }

int mc_topology_search(const mc_config *c, int resistor_count, int samples,
                       unsigned long long seed, mc_topo_report **out,
                       char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!out)
            throw ConfigError("null output pointer");
        const CellConfig &cfg = need(c);
        *out = new mc_topo_report{topology_search(
            resistor_count, samples, seed, cfg.v_read, cfg.r_load)};
    });
}

int mc_topo_candidate_count(const mc_topo_report *r) {
    return r ? static_cast<int>(r->r.candidates.size()) : -1;
}

int mc_topo_exact_count(const mc_topo_report *r) {
    return r ? r->r.exact_count : -1;
}

int mc_topo_row(const mc_topo_report *r, int index,
                char *edges, size_t edgeslen, double *max_rel_dev) {
    if (!r || index < 0 ||
        index >= static_cast<int>(r->r.candidates.size()))
        return MC_ERR_CONFIG;
    const TopoCandidate &cand = r->r.candidates[index];
    if (edges)
        put_str(cand.edges, edges, edgeslen);
    if (max_rel_dev)
        *max_rel_dev = cand.max_rel_dev;
    return MC_OK;
}

int mc_topo_write_csv(const mc_topo_report *r, const char *path,
                      char *err, size_t errlen) {
    return guarded(err, errlen, [&] {
        if (!r || !path)
            throw ConfigError("null report or path");
        write_topology_csv(r->r, path);
    });
}

void mc_topo_report_free(mc_topo_report *r) { delete r; }

} // extern "C"
