// memcell command-line front end. Parses a flat key = value config, drives
// the simulation/analysis library through its C interface, and writes CSV
// artifacts plus a run manifest next to the primary output.
//
// Exit codes: 0 ok, 1 usage or configuration problem, 2 simulation failure.

#include <chrono>
#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "memcell.h"

namespace {

char g_err[512];

struct RunInfo {
    std::string command;
    std::string seed = "none";
    std::vector<std::string> outputs;
};

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int fail(int status, const char *what) {
    std::fprintf(stderr, "%s: %s\n",
                 status == MC_ERR_SIMULATION ? "simulation error"
                                             : "config error",
                 what);
    return status;
}

std::string render_snapshot(mc_config *cfg, int *status) {
    const int need = mc_config_render(cfg, nullptr, 0, g_err, sizeof g_err);
    if (need < 0) {
        *status = fail(MC_ERR_CONFIG, g_err);
        return "";
    }
    std::string snap(static_cast<size_t>(need) + 1, '\0');
    mc_config_render(cfg, snap.data(), snap.size(), g_err, sizeof g_err);
    snap.resize(static_cast<size_t>(need));
    *status = MC_OK;
    return snap;
}

// Reads one "key = value" line back out of a rendered snapshot.
double snapshot_value(const std::string &snap, const std::string &key,
                      double fallback) {
    size_t pos = 0;
    while (pos < snap.size()) {
        size_t end = snap.find('\n', pos);
        if (end == std::string::npos)
            end = snap.size();
        const std::string line = snap.substr(pos, end - pos);
        const std::string prefix = key + " = ";
        if (line.rfind(prefix, 0) == 0)
            return std::strtod(line.c_str() + prefix.size(), nullptr);
        pos = end + 1;
    }
    return fallback;
}

int write_manifest(mc_config *cfg, const RunInfo &ri, double duration_s) {
    if (ri.outputs.empty())
        return MC_OK;
    int status = MC_OK;
    const std::string snap = render_snapshot(cfg, &status);
    if (status != MC_OK)
        return status;

    std::string text = std::string("# memcell ") + mc_version() + "\n";
    text += "# command: " + ri.command + "\n";
    text += "# seed: " + ri.seed + "\n";
    text += "# outputs: ";
    for (size_t i = 0; i < ri.outputs.size(); ++i)
        text += (i ? ", " : "") + ri.outputs[i];
    text += "\n";
    char dur[64];
    std::snprintf(dur, sizeof dur, "# duration_s: %.3f\n", duration_s);
    text += dur;
    text += snap;

    const std::string path = ri.outputs.front() + ".manifest";
    std::FILE *f = std::fopen(path.c_str(), "wb");
    if (!f)
        return fail(MC_ERR_CONFIG, ("cannot write " + path).c_str());
    const size_t n = std::fwrite(text.data(), 1, text.size(), f);
    if (std::fclose(f) != 0 || n != text.size())
        return fail(MC_ERR_CONFIG, ("short write to " + path).c_str());
    return MC_OK;
}

} // namespace

int main(int argc, char **argv) {
    std::setlocale(LC_NUMERIC, "C");

    CLI::App app{"multilevel memristive memory-cell simulator"};
    app.set_version_flag("--version",
                         std::string("memcell ") + mc_version());
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("-c,--config", config_path,
                   "key = value config file; omitted keys use defaults");

    // levels
    auto *cmd_levels = app.add_subcommand(
        "levels", "enumerate every pattern's settled output voltage");
    std::string lv_mode = "closed-form", lv_out = "levels.csv";
    double lv_eps = -1.0;
    cmd_levels->add_option("--mode", lv_mode,
                           "closed-form or transient")
        ->check(CLI::IsMember({"closed-form", "transient"}));
    cmd_levels->add_option("--out", lv_out, "level table CSV path");
    cmd_levels->add_option(
        "--epsilon", lv_eps,
        "distinctness threshold; default from the config epsilons");

    // histogram
    auto *cmd_hist = app.add_subcommand(
        "histogram", "adjacent-gap list and fixed-width histogram");
    std::string hg_mode = "closed-form", hg_out = "histogram.csv",
                hg_gaps = "gaps.csv";
    double hg_width = 20.0;
    cmd_hist->add_option("--mode", hg_mode, "closed-form or transient")
        ->check(CLI::IsMember({"closed-form", "transient"}));
    cmd_hist->add_option("--out", hg_out, "histogram CSV path");
    cmd_hist->add_option("--gaps-out", hg_gaps, "gap list CSV path");
    cmd_hist->add_option("--bin-width", hg_width, "bin width in percent");

    // sensitivity
    auto *cmd_sens = app.add_subcommand(
        "sensitivity", "write-amplitude perturbation study");
    double sn_delta = 0.05;
    std::string sn_sampling = "corners", sn_out = "sensitivity.csv";
    int sn_samples = 64;
    unsigned long long sn_seed = 1;
    cmd_sens->add_option("--delta", sn_delta, "relative amplitude change");
    cmd_sens->add_option("--sampling", sn_sampling,
                         "corners or monte-carlo")
        ->check(CLI::IsMember({"corners", "monte-carlo"}));
    cmd_sens->add_option("--samples", sn_samples,
                         "draws per pattern (monte-carlo only)");
    cmd_sens->add_option("--seed", sn_seed, "generator seed (monte-carlo)");
    cmd_sens->add_option("--out", sn_out, "report CSV path");

    // transient
    auto *cmd_tr = app.add_subcommand(
        "transient", "full reset/write/read cycle with a step-level trace");
    std::string tr_pattern, tr_trace = "trace.csv";
    cmd_tr->add_option("--pattern", tr_pattern, "digit pattern, e.g. 021")
        ->required();
    cmd_tr->add_option("--trace", tr_trace, "trace CSV path");

    // topology-search
    auto *cmd_topo = app.add_subcommand(
        "topology-search",
        "rank sub-cell wirings against the closed-form readout");
    int tp_resistors = 4, tp_samples = 200;
    unsigned long long tp_seed = 1;
    std::string tp_out = "topology.csv";
    cmd_topo->add_option("--resistors", tp_resistors,
                         "equal resistors per candidate");
    cmd_topo->add_option("--samples", tp_samples,
                         "random draws per candidate");
    cmd_topo->add_option("--seed", tp_seed, "draw seed");
    cmd_topo->add_option("--out", tp_out, "candidate CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return MC_ERR_CONFIG;
    }

    mc_config *cfg = nullptr;
    if (!config_path.empty()) {
        cfg = mc_config_load(config_path.c_str(), g_err, sizeof g_err);
        if (!cfg)
            return fail(MC_ERR_CONFIG, g_err);
    } else {
        cfg = mc_config_create();
        if (!cfg)
            return fail(MC_ERR_SIMULATION, "out of memory");
    }

    int status = MC_OK;
    RunInfo ri;
    const auto t_start = std::chrono::steady_clock::now();

    if (cmd_levels->parsed()) {
        mc_level_table *t = nullptr;
        status = mc_enumerate_levels(cfg, lv_mode.c_str(), &t, g_err,
                                     sizeof g_err);
        if (status != MC_OK) {
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        double eps = lv_eps;
        if (eps < 0.0) {
            int sst = MC_OK;
            const std::string snap = render_snapshot(cfg, &sst);
            if (sst != MC_OK) {
                mc_level_table_free(t);
                mc_config_free(cfg);
                return sst;
            }
            eps = (lv_mode == "closed-form")
                      ? snapshot_value(snap, "epsilon_closed_form", 1e-9)
                      : snapshot_value(snap, "epsilon_transient", 0.005);
        }
        status = mc_level_table_write_csv(t, lv_out.c_str(), g_err,
                                          sizeof g_err);
        if (status != MC_OK) {
            mc_level_table_free(t);
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        const int rows = mc_level_count(t);
        const int distinct = mc_count_distinct(t, eps);
        mc_level_table_free(t);
        std::printf("%s: %d patterns, %d distinct levels (epsilon %s)\n",
                    lv_out.c_str(), rows, distinct, fmt_num(eps).c_str());
        ri.command = "levels --mode " + lv_mode + " --epsilon " +
                     fmt_num(eps) + " --out " + lv_out;
        ri.outputs = {lv_out};
    } else if (cmd_hist->parsed()) {
        mc_level_table *t = nullptr;
        status = mc_enumerate_levels(cfg, hg_mode.c_str(), &t, g_err,
                                     sizeof g_err);
        if (status != MC_OK) {
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        mc_gap_list *g = nullptr;
        status = mc_adjacent_gaps(t, &g, g_err, sizeof g_err);
        mc_level_table_free(t);
        if (status != MC_OK) {
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        status = mc_gap_list_write_csv(g, hg_gaps.c_str(), g_err,
                                       sizeof g_err);
        if (status == MC_OK)
            status = mc_histogram_write_csv(g, hg_width, hg_out.c_str(),
                                            g_err, sizeof g_err);
        const int gaps = mc_gap_count(g);
        mc_gap_list_free(g);
        if (status != MC_OK) {
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        std::printf("%s, %s: %d adjacent gaps, bin width %s%%\n",
                    hg_gaps.c_str(), hg_out.c_str(), gaps,
                    fmt_num(hg_width).c_str());
        ri.command = "histogram --mode " + hg_mode + " --bin-width " +
                     fmt_num(hg_width) + " --gaps-out " + hg_gaps +
                     " --out " + hg_out;
        ri.outputs = {hg_out, hg_gaps};
    } else if (cmd_sens->parsed()) {
        mc_sens_report *r = nullptr;
        status = mc_sensitivity(cfg, sn_delta, sn_sampling.c_str(),
                                sn_samples, sn_seed, &r, g_err,
                                sizeof g_err);
        if (status != MC_OK) {
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        status = mc_sens_write_csv(r, sn_out.c_str(), g_err, sizeof g_err);
        double avg_mean = 0.0, avg_std = 0.0;
        mc_sens_average(r, &avg_mean, &avg_std);
        mc_sens_report_free(r);
        if (status != MC_OK) {
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        std::printf("%s: average error %s%% (spread %s%%)\n",
                    sn_out.c_str(), fmt_num(avg_mean).c_str(),
                    fmt_num(avg_std).c_str());
        ri.command = "sensitivity --delta " + fmt_num(sn_delta) +
                     " --sampling " + sn_sampling;
        if (sn_sampling == "monte-carlo") {
            ri.command += " --samples " + std::to_string(sn_samples) +
                          " --seed " + std::to_string(sn_seed);
            ri.seed = std::to_string(sn_seed);
        }
        ri.command += " --out " + sn_out;
        ri.outputs = {sn_out};
    } else if (cmd_tr->parsed()) {
        double vout = 0.0;
        status = mc_write_trace(cfg, tr_pattern.c_str(), tr_trace.c_str(),
                                &vout, g_err, sizeof g_err);
        if (status != MC_OK) {
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        std::printf("%s: pattern %s reads %s V\n", tr_trace.c_str(),
                    tr_pattern.c_str(), fmt_num(vout).c_str());
        ri.command = "transient --pattern " + tr_pattern + " --trace " +
                     tr_trace;
        ri.outputs = {tr_trace};
    } else if (cmd_topo->parsed()) {
        mc_topo_report *r = nullptr;
        status = mc_topology_search(cfg, tp_resistors, tp_samples, tp_seed,
                                    &r, g_err, sizeof g_err);
        if (status != MC_OK) {
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        status = mc_topo_write_csv(r, tp_out.c_str(), g_err, sizeof g_err);
        const int cands = mc_topo_candidate_count(r);
        const int exact = mc_topo_exact_count(r);
        char best_edges[256] = "";
        double best_dev = 0.0;
        if (cands > 0)
            mc_topo_row(r, 0, best_edges, sizeof best_edges, &best_dev);
        mc_topo_report_free(r);
        if (status != MC_OK) {
            mc_config_free(cfg);
            return fail(status, g_err);
        }
        std::printf("%s: %d candidates, %d exact; best %s at %s\n",
                    tp_out.c_str(), cands, exact, best_edges,
                    fmt_num(best_dev).c_str());
        ri.command = "topology-search --resistors " +
                     std::to_string(tp_resistors) + " --samples " +
                     std::to_string(tp_samples) + " --seed " +
                     std::to_string(tp_seed) + " --out " + tp_out;
        ri.seed = std::to_string(tp_seed);
        ri.outputs = {tp_out};
    }

    const double duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
    if (!config_path.empty())
        ri.command = "--config " + config_path + " " + ri.command;
    status = write_manifest(cfg, ri, duration_s);
    mc_config_free(cfg);
    return status;
}
