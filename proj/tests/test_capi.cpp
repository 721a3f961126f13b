#include <cmath>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "golden_data.h"
#include "memcell.h"

namespace {

struct Cfg {
    mc_config *p;
    Cfg() : p(mc_config_create()) { REQUIRE(p != nullptr); }
    ~Cfg() { mc_config_free(p); }
    operator mc_config *() { return p; }
    operator const mc_config *() const { return p; }
};

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

bool rel_close(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

char err[512];

} // namespace

TEST_CASE("version string is present") {
    REQUIRE(mc_version() != nullptr);
    CHECK(std::string(mc_version()) == "1.0.0");
}

TEST_CASE("config set, validate, and diagnostics") {
    Cfg c;
    CHECK(mc_config_set(c, "v_read", "0.05", err, sizeof err) == MC_OK);
    err[0] = '\0';
    CHECK(mc_config_set(c, "wibble", "1", err, sizeof err) ==
          MC_ERR_CONFIG);
    CHECK(std::string(err).find("wibble") != std::string::npos);
    CHECK(mc_config_set(c, "n", "three", err, sizeof err) == MC_ERR_CONFIG);

    CHECK(mc_config_validate(c, err, sizeof err) == MC_OK);
    CHECK(mc_config_set(c, "m", "1", err, sizeof err) == MC_OK);
    err[0] = '\0';
    CHECK(mc_config_validate(c, err, sizeof err) == MC_ERR_CONFIG);
    CHECK(err[0] != '\0');
}

TEST_CASE("render length protocol and file round-trip") {
    Cfg c;
    const int need = mc_config_render(c, nullptr, 0, err, sizeof err);
    REQUIRE(need > 0);
    std::vector<char> buf(static_cast<size_t>(need) + 1);
    REQUIRE(mc_config_render(c, buf.data(), buf.size(), err, sizeof err) ==
            need);
    const std::string text(buf.data());
    CHECK(static_cast<int>(text.size()) == need);
    REQUIRE(mc_config_render(c, buf.data(), buf.size(), err, sizeof err) ==
            need);
    CHECK(std::string(buf.data()) == text);

    {
        std::ofstream out("tmp_capi_cfg.txt", std::ios::binary);
        out << text;
    }
    mc_config *loaded = mc_config_load("tmp_capi_cfg.txt", err, sizeof err);
    REQUIRE(loaded != nullptr);
    std::vector<char> buf2(buf.size());
    REQUIRE(mc_config_render(loaded, buf2.data(), buf2.size(), err,
                             sizeof err) == need);
    CHECK(std::string(buf2.data()) == text);
    mc_config_free(loaded);

    err[0] = '\0';
    CHECK(mc_config_load("tmp_capi_no_such_file.txt", err, sizeof err) ==
          nullptr);
    CHECK(err[0] != '\0');
}

TEST_CASE("device endpoints exposed through the C layer") {
    Cfg c;
    double v = 0.0;
    CHECK(mc_memristance(c, 1.0, &v, err, sizeof err) == MC_OK);
    CHECK(v == 100.0);
    CHECK(mc_memristance(c, 0.0, &v, err, sizeof err) == MC_OK);
    CHECK(v == 2e6);

    CHECK(mc_window(0.5, 2, &v, err, sizeof err) == MC_OK);
    CHECK(v == 1.0);
    CHECK(mc_window(0.5, 0, &v, err, sizeof err) == MC_ERR_CONFIG);

    CHECK(mc_drift_rate(c, 0.5, 0.1, &v, err, sizeof err) == MC_OK);
    CHECK(v == 0.0); // below the conduction threshold
    CHECK(mc_drift_rate(c, 0.5, 3.0, &v, err, sizeof err) == MC_OK);
    CHECK(v < 0.0);

    double x1 = 0.0;
    CHECK(mc_device_step(c, 0.5, 3.0, 1e-9, &x1, err, sizeof err) == MC_OK);
    CHECK(x1 < 0.5);
    CHECK(x1 >= 0.0);

    CHECK(mc_state_for_resistance(c, 100.0, &v, err, sizeof err) == MC_OK);
    CHECK(v == 1.0);
    CHECK(mc_state_for_resistance(c, 50.0, &v, err, sizeof err) ==
          MC_ERR_CONFIG);

    double gain = 0.0;
    CHECK(mc_calibrate_drift(c, 232.068, 918.906, 1.5, 100e-9, &gain, err,
                             sizeof err) == MC_OK);
    CHECK(rel_close(gain, golden::kCalibratedGain, 1e-3));
    CHECK(mc_calibrate_drift(c, 232.068, 918.906, 0.1, 100e-9, &gain, err,
                             sizeof err) == MC_ERR_CONFIG);
}

TEST_CASE("closed-form readout endpoints") {
    double r1c = 0.0, r2c = 0.0, k = 0.0;
    CHECK(mc_subcell_aux(150.0, 75.0, &r1c, &r2c, &k, err, sizeof err) ==
          MC_OK);
    CHECK(r1c == 112.5);
    CHECK(r2c == 93.75);
    CHECK(k == 3.2);
    CHECK(mc_subcell_aux(150.0, -1.0, &r1c, &r2c, &k, err, sizeof err) ==
          MC_ERR_CONFIG);

    const double m[3] = {232.068, 232.132, 233.760}; // per-resistor "0" states
    const double r[3] = {20.0, 60.0, 180.0};
    double vout = 0.0;
    CHECK(mc_closed_form_vout(m, r, 3, 20.0, 0.1, &vout, err, sizeof err) ==
          MC_OK);
    CHECK(rel_close(vout, golden::k27Levels[0].v_out, 1e-12));
    CHECK(mc_closed_form_vout(m, r, 0, 20.0, 0.1, &vout, err, sizeof err) ==
          MC_ERR_CONFIG);
}

TEST_CASE("full cycle and trace through the C layer") {
    Cfg c;
    double vout = 0.0;
    double final_x[3] = {0.0, 0.0, 0.0};
    CHECK(mc_run_cycle(c, "021", &vout, final_x, err, sizeof err) == MC_OK);
    CHECK(vout > 0.0);
    CHECK(vout < 0.1);
    for (double x : final_x) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
    }
    CHECK(mc_run_cycle(c, "03", &vout, nullptr, err, sizeof err) ==
          MC_ERR_CONFIG);
    CHECK(mc_run_cycle(c, "093", &vout, nullptr, err, sizeof err) ==
          MC_ERR_CONFIG);

    double vtrace = 0.0;
    CHECK(mc_write_trace(c, "021", "tmp_capi_trace.csv", &vtrace, err,
                         sizeof err) == MC_OK);
    CHECK(vtrace == vout); // same deterministic cycle
    const std::string trace = slurp("tmp_capi_trace.csv");
    CHECK(trace.rfind("t_s,", 0) == 0);
}

TEST_CASE("level tables and gaps through the C layer") {
    Cfg c;
    mc_level_table *t = nullptr;
    REQUIRE(mc_enumerate_levels(c, "closed-form", &t, err, sizeof err) ==
            MC_OK);
    REQUIRE(t != nullptr);
    CHECK(mc_level_count(t) == 27);
    char pat[8];
    double v = 0.0;
    CHECK(mc_level_row(t, 0, pat, sizeof pat, &v) == MC_OK);
    CHECK(std::string(pat) == "000");
    CHECK(rel_close(v, golden::k27Levels[0].v_out, 1e-12));
    CHECK(mc_level_row(t, 27, pat, sizeof pat, &v) == MC_ERR_CONFIG);
    CHECK(mc_count_distinct(t, 1e-9) == 27);
    CHECK(mc_count_distinct(t, -1.0) == -1);
    CHECK(mc_level_table_write_csv(t, "tmp_capi_levels.csv", err,
                                   sizeof err) == MC_OK);
    CHECK(slurp("tmp_capi_levels.csv").rfind("pattern,v_out_V,source", 0) ==
          0);

    mc_gap_list *g = nullptr;
    REQUIRE(mc_adjacent_gaps(t, &g, err, sizeof err) == MC_OK);
    CHECK(mc_gap_count(g) == 26);
    char hi[8], lo[8];
    double pct = 0.0;
    CHECK(mc_gap_row(g, 0, hi, sizeof hi, lo, sizeof lo, &pct) == MC_OK);
    CHECK(std::string(hi) == golden::k27Gaps[0].hi);
    CHECK(std::string(lo) == golden::k27Gaps[0].lo);
    CHECK(rel_close(pct, golden::k27Gaps[0].pct, 1e-9));
    CHECK(mc_gap_list_write_csv(g, "tmp_capi_gaps.csv", err, sizeof err) ==
          MC_OK);
    CHECK(mc_histogram_write_csv(g, 20.0, "tmp_capi_hist.csv", err,
                                 sizeof err) == MC_OK);
    CHECK(slurp("tmp_capi_hist.csv").rfind("bin_lo_pct,bin_hi_pct,count",
                                           0) == 0);
    mc_gap_list_free(g);

    mc_gap_list *near = nullptr;
    REQUIRE(mc_closest_pairs(t, 4, &near, err, sizeof err) == MC_OK);
    CHECK(mc_gap_count(near) == 4);
    double prev = 0.0;
    for (int i = 0; i < 4; ++i) {
        CHECK(mc_gap_row(near, i, hi, sizeof hi, lo, sizeof lo, &pct) ==
              MC_OK);
        CHECK(pct >= prev);
        prev = pct;
    }
    mc_gap_list_free(near);
    mc_level_table_free(t);

    mc_level_table *bad = nullptr;
    CHECK(mc_enumerate_levels(c, "psychic", &bad, err, sizeof err) ==
          MC_ERR_CONFIG);
    CHECK(bad == nullptr);
}

TEST_CASE("distinct level count collapses for equal resistors") {
    Cfg c;
    REQUIRE(mc_config_set(c, "r_sub", "20,20,20", err, sizeof err) == MC_OK);
    mc_level_table *t = nullptr;
    REQUIRE(mc_enumerate_levels(c, "closed-form", &t, err, sizeof err) ==
            MC_OK);
    CHECK(mc_count_distinct(t, 1e-9) == 10);
    mc_level_table_free(t);
}

TEST_CASE("sensitivity through the C layer") {
    Cfg c;
    REQUIRE(mc_config_set(c, "n", "2", err, sizeof err) == MC_OK);
    REQUIRE(mc_config_set(c, "m", "2", err, sizeof err) == MC_OK);
    REQUIRE(mc_config_set(c, "r_sub", "20,60", err, sizeof err) == MC_OK);

    mc_sens_report *r = nullptr;
    REQUIRE(mc_sensitivity(c, 0.05, "corners", 0, 0, &r, err, sizeof err) ==
            MC_OK);
    REQUIRE(mc_sens_count(r) == 4);
    char pat[8];
    double mean = -1.0, sd = -1.0;
    int samples = 0;
    CHECK(mc_sens_row(r, 0, pat, sizeof pat, &mean, &sd, &samples) == MC_OK);
    CHECK(std::string(pat) == "00");
    CHECK(mean == 0.0);
    CHECK(sd == 0.0);
    CHECK(samples == 1);
    double am = 0.0, as = 0.0;
    CHECK(mc_sens_average(r, &am, &as) == MC_OK);
    CHECK(am >= 0.0);
    CHECK(mc_sens_write_csv(r, "tmp_capi_sens.csv", err, sizeof err) ==
          MC_OK);
    CHECK(slurp("tmp_capi_sens.csv").rfind(
              "pattern,mean_rel_err_pct,std_rel_err_pct,samples", 0) == 0);
    mc_sens_report_free(r);

    mc_sens_report *a = nullptr, *b = nullptr;
    REQUIRE(mc_sensitivity(c, 0.05, "monte-carlo", 2, 7, &a, err,
                           sizeof err) == MC_OK);
    REQUIRE(mc_sensitivity(c, 0.05, "monte-carlo", 2, 7, &b, err,
                           sizeof err) == MC_OK);
    for (int i = 0; i < mc_sens_count(a); ++i) {
        double ma, sa, mb, sb;
        int na, nb;
        CHECK(mc_sens_row(a, i, pat, sizeof pat, &ma, &sa, &na) == MC_OK);
        CHECK(mc_sens_row(b, i, pat, sizeof pat, &mb, &sb, &nb) == MC_OK);
        CHECK(ma == mb);
        CHECK(sa == sb);
        CHECK(na == 2);
    }
    mc_sens_report_free(a);
    mc_sens_report_free(b);

    mc_sens_report *bad = nullptr;
    CHECK(mc_sensitivity(c, 0.05, "guesswork", 0, 0, &bad, err,
                         sizeof err) == MC_ERR_CONFIG);
    CHECK(bad == nullptr);
}

TEST_CASE("topology search through the C layer") {
    Cfg c;
    mc_topo_report *r = nullptr;
    REQUIRE(mc_topology_search(c, 1, 5, 1, &r, err, sizeof err) == MC_OK);
    REQUIRE(r != nullptr);
    CHECK(mc_topo_candidate_count(r) > 0);
    CHECK(mc_topo_exact_count(r) == 0);
    char edges[128];
    double dev = -1.0;
    CHECK(mc_topo_row(r, 0, edges, sizeof edges, &dev) == MC_OK);
    CHECK(std::strlen(edges) > 0);
    CHECK(dev >= 0.0);
    CHECK(mc_topo_write_csv(r, "tmp_capi_topo.csv", err, sizeof err) ==
          MC_OK);
    CHECK(slurp("tmp_capi_topo.csv").rfind("edges,max_rel_dev", 0) == 0);
    mc_topo_report_free(r);
}

TEST_CASE("null handles are rejected, not dereferenced") {
    CHECK(mc_level_count(nullptr) == -1);
    CHECK(mc_gap_count(nullptr) == -1);
    CHECK(mc_sens_count(nullptr) == -1);
    CHECK(mc_topo_candidate_count(nullptr) == -1);
    CHECK(mc_count_distinct(nullptr, 1e-9) == -1);
    double v = 0.0;
    CHECK(mc_memristance(nullptr, 0.5, &v, err, sizeof err) ==
          MC_ERR_CONFIG);
    mc_level_table *t = nullptr;
    CHECK(mc_enumerate_levels(nullptr, "closed-form", &t, err, sizeof err) ==
          MC_ERR_CONFIG);
    mc_level_table_free(nullptr);
    mc_gap_list_free(nullptr);
    mc_sens_report_free(nullptr);
    mc_topo_report_free(nullptr);
    mc_config_free(nullptr);
}
