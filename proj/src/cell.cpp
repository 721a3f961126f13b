#include "cell.h"

#include <cmath>

#include "errors.h"
#include "readout.h"
#include "textio.h"

namespace memcell {

void validate(const CellConfig &cfg) {
    if (cfg.n < 1)
        throw ConfigError("n must be at least 1");
    if (cfg.m < 2)
        throw ConfigError("m must be at least 2");
    if (cfg.m > 10)
        throw ConfigError("m above 10 breaks single-digit pattern strings");
    if (static_cast<int>(cfg.r_sub.size()) != cfg.n)
        throw ConfigError("r_sub needs exactly n = " + std::to_string(cfg.n) +
                          " entries, got " + std::to_string(cfg.r_sub.size()));
    for (double r : cfg.r_sub)
        if (!(r > 0.0))
            throw ConfigError("r_sub entries must be positive, got " +
                              fmt_g(r));
    if (!(cfg.r_load > 0.0))
        throw ConfigError("r_load must be positive");
    for (double t : {cfg.t_reset, cfg.t_write, cfg.t_read})
        if (!(t > 0.0))
            throw ConfigError("phase durations must be positive");
    if (!(cfg.dt > 0.0))
        throw ConfigError("dt must be positive");
    if (!(cfg.v_max > 0.0))
        throw ConfigError("v_max must be positive");

    validate(cfg.device);
    const double v_min_write = cfg.v_max / (cfg.m - 1);
    if (!(cfg.v_read > 0.0) || !(cfg.v_read < cfg.device.v_threshold) ||
        !(cfg.device.v_threshold < v_min_write))
        throw ConfigError(
            "need 0 < v_read < v_threshold < v_max/(m-1); got v_read = " +
            fmt_g(cfg.v_read) + ", v_threshold = " +
            fmt_g(cfg.device.v_threshold) + ", v_max/(m-1) = " +
            fmt_g(v_min_write));

    if (cfg.topology != "tee" && cfg.topology != "ladder5")
        throw ConfigError("unknown topology '" + cfg.topology +
                          "' (expected tee or ladder5)");
    if (cfg.m_initial < cfg.device.r_on || cfg.m_initial > cfg.device.r_off)
        throw ConfigError("m_initial outside [r_on, r_off]");
    if (!(cfg.epsilon_closed_form >= 0.0) || !(cfg.epsilon_transient >= 0.0))
        throw ConfigError("distinctness epsilons must be non-negative");
}

CellConfig resolve(const CellConfig &cfg) {
    CellConfig out = cfg;
    if (out.mobility_auto) {
        DeviceParams base = out.device;
        base.mobility = 1.0; // placeholder; calibration owns the gain
        out.device.mobility =
            calibrate_drift(base, 232.068, 918.906, 1.5, 100e-9);
        out.mobility_auto = false;
    }
    return out;
}

WritePattern WritePattern::parse(const std::string &text,
                                 const CellConfig &cfg) {
    if (static_cast<int>(text.size()) != cfg.n)
        throw ConfigError("pattern '" + text + "' must have exactly " +
                          std::to_string(cfg.n) + " digits");
    WritePattern p;
    for (char c : text) {
        if (c < '0' || c > '9')
            throw ConfigError("pattern '" + text + "' has a non-digit");
        const int d = c - '0';
        if (d >= cfg.m)
            throw ConfigError("pattern '" + text + "' digit " +
                              std::string(1, c) + " exceeds m-1 = " +
                              std::to_string(cfg.m - 1));
        p.digits.push_back(d);
    }
    return p;
}

std::string WritePattern::str() const {
    std::string s;
    for (int d : digits)
        s += static_cast<char>('0' + d);
    return s;
}

double digit_voltage(int d, const CellConfig &cfg) {
    if (d < 0 || d >= cfg.m)
        throw ConfigError("digit " + std::to_string(d) + " outside [0, m-1]");
    return d * cfg.v_max / (cfg.m - 1);
}

Schedule make_schedule(const WritePattern &pat, const CellConfig &cfg,
                       const std::vector<double> &write_scale) {
    if (static_cast<int>(pat.digits.size()) != cfg.n)
        throw ConfigError("pattern length does not match n");
    if (!write_scale.empty() &&
        static_cast<int>(write_scale.size()) != cfg.n)
        throw ConfigError("write_scale needs one factor per sub-cell");

    Schedule s;
    s.t_reset_end = cfg.t_reset;
    s.t_write_end = cfg.t_reset + cfg.t_write;
    s.t_end = s.t_write_end + cfg.t_read;

    s.port_waves["Vs"] = {{{0.0, s.t_reset_end, cfg.v_max}}};
    for (int i = 0; i < cfg.n; ++i) {
        const double scale = write_scale.empty() ? 1.0 : write_scale[i];
        const double amp = digit_voltage(pat.digits[i], cfg) * scale;
        s.port_waves["Vw" + std::to_string(i + 1)] = {
            {{s.t_reset_end, s.t_write_end, amp}}};
    }
    s.port_waves["Vr"] = {{{s.t_write_end, s.t_end, cfg.v_read}}};
    return s;
}

Netlist build_netlist(const CellConfig &cfg) {
    validate(cfg);
    Netlist nl;
    const int rail_read = nl.add_node("rail_read");
    const int out = nl.add_node("out");

    if (cfg.topology == "tee") {
        const int rail_reset = nl.add_node("rail_reset");
        std::vector<int> wports;
        for (int i = 1; i <= cfg.n; ++i)
            wports.push_back(nl.add_node("w" + std::to_string(i)));
        for (int i = 1; i <= cfg.n; ++i) {
            const std::string si = "s" + std::to_string(i);
            const double r = cfg.r_sub[i - 1];
            const int a = nl.add_node(si + "_a");
            const int b = nl.add_node(si + "_b");
            nl.resistors.push_back({"R" + std::to_string(i) + "_read",
                                    rail_read, a, r});
            nl.resistors.push_back({"R" + std::to_string(i) + "_write",
                                    wports[i - 1], a, r});
            nl.resistors.push_back({"R" + std::to_string(i) + "_reset",
                                    rail_reset, b, r});
            nl.resistors.push_back({"R" + std::to_string(i) + "_out", b, out,
                                    r});
            nl.memristors.push_back({"m" + std::to_string(i), a, b});
        }
        nl.sources.push_back({"Vr", rail_read, 0, {}});
        nl.sources.push_back({"Vs", rail_reset, 0, {}});
        for (int i = 1; i <= cfg.n; ++i)
            nl.sources.push_back({"Vw" + std::to_string(i), wports[i - 1], 0,
                                  {}});
    } else { // ladder5: read-mode network only
        for (int i = 1; i <= cfg.n; ++i) {
            const std::string si = "s" + std::to_string(i);
            const double r = cfg.r_sub[i - 1];
            const int a = nl.add_node(si + "_a");
            const int b = nl.add_node(si + "_b");
            const int c = nl.add_node(si + "_c");
            nl.resistors.push_back({"R" + std::to_string(i) + "_in",
                                    rail_read, a, r});
            nl.resistors.push_back({"R" + std::to_string(i) + "_mid", a, c,
                                    r});
            nl.resistors.push_back({"R" + std::to_string(i) + "_cross", b, c,
                                    r});
            nl.resistors.push_back({"R" + std::to_string(i) + "_gnd", c, 0,
                                    r});
            nl.resistors.push_back({"R" + std::to_string(i) + "_out", b, out,
                                    r});
            nl.memristors.push_back({"m" + std::to_string(i), a, b});
        }
        nl.sources.push_back({"Vr", rail_read, 0, {}});
    }

    nl.resistors.push_back({"R_load", out, 0, cfg.r_load});
    return nl;
}

static void apply_schedule(Netlist &nl, const Schedule &sched) {
    for (auto &src : nl.sources) {
        auto it = sched.port_waves.find(src.name);
        src.wave = (it == sched.port_waves.end()) ? Waveform{} : it->second;
    }
}

static DeviceMap initial_devices(const CellConfig &cfg) {
    DeviceMap devs;
    for (int i = 1; i <= cfg.n; ++i)
        devs["m" + std::to_string(i)] = {
            state_for_resistance(cfg.m_initial, cfg.device), cfg.device};
    return devs;
}

CycleResult run_cycle(const CellConfig &cfg0, const WritePattern &pat,
                      const std::vector<double> &write_scale,
                      Trace *trace_out) {
    const CellConfig cfg = resolve(cfg0);
    if (cfg.topology != "tee")
        throw ConfigError("topology '" + cfg.topology +
                          "' has no write/reset ports; full cycles need tee");

    Netlist nl = build_netlist(cfg);
    const Schedule sched = make_schedule(pat, cfg, write_scale);
    apply_schedule(nl, sched);
    const int out_node = nl.node("out");

    // Reset and write in one run, then the read separately so the states
    // entering the read window are observable.
    const bool want_trace = trace_out != nullptr;
    TransientResult rw = transient(nl, initial_devices(cfg),
                                   sched.t_write_end, cfg.dt, want_trace);

    DeviceMap read_devs;
    CycleResult res;
    for (int i = 1; i <= cfg.n; ++i) {
        const std::string id = "m" + std::to_string(i);
        const DeviceState st = rw.final_states.at(id);
        read_devs[id] = {st, cfg.device};
        res.read_start_m.push_back(memristance(st, cfg.device));
    }

    TransientResult rd = transient(nl, read_devs, sched.t_end, cfg.dt, true,
                                   sched.t_write_end);

    const double window_start =
        sched.t_write_end + 0.2 * cfg.t_read; // settle the leading edge
    double sum = 0.0;
    long count = 0;
    for (const auto &row : rd.trace.rows) {
        if (row.t >= window_start) {
            sum += row.node_v[out_node - 1];
            ++count;
        }
    }
    if (count == 0)
        throw ConfigError("read window too short for dt: no settled samples");
    res.v_out = sum / count;

    for (int i = 1; i <= cfg.n; ++i) {
        const std::string id = "m" + std::to_string(i);
        const DeviceState fin = rd.final_states.at(id);
        res.final_states.push_back(fin);
        const double m0 = res.read_start_m[i - 1];
        const double m1 = memristance(fin, cfg.device);
        res.read_drift_rel_max =
            std::max(res.read_drift_rel_max, std::fabs(m1 - m0) / m0);
    }
    res.kcl_rel_max = std::max(rw.trace.kcl_rel_max, rd.trace.kcl_rel_max);

    if (trace_out) {
        *trace_out = std::move(rw.trace);
        trace_out->rows.insert(trace_out->rows.end(), rd.trace.rows.begin(),
                               rd.trace.rows.end());
        trace_out->kcl_rel_max = res.kcl_rel_max;
    }
    return res;
}

std::vector<DeviceState> apply_reset(const CellConfig &cfg0,
                                     const std::vector<DeviceState> &from,
                                     int times) {
    const CellConfig cfg = resolve(cfg0);
    if (cfg.topology != "tee")
        throw ConfigError("reset needs the tee topology");
    if (static_cast<int>(from.size()) != cfg.n)
        throw ConfigError("apply_reset needs one state per sub-cell");

    Netlist nl = build_netlist(cfg);
    const Schedule sched = make_schedule(
        WritePattern::parse(std::string(cfg.n, '0'), cfg), cfg);
    apply_schedule(nl, sched);

    std::vector<DeviceState> states = from;
    for (int rep = 0; rep < times; ++rep) {
        DeviceMap devs;
        for (int i = 1; i <= cfg.n; ++i)
            devs["m" + std::to_string(i)] = {states[i - 1], cfg.device};
        TransientResult r =
            transient(nl, devs, cfg.t_reset, cfg.dt, false);
        for (int i = 1; i <= cfg.n; ++i)
            states[i - 1] = r.final_states.at("m" + std::to_string(i));
    }
    return states;
}

double read_closed_form(const CellConfig &cfg,
                        const std::vector<DeviceState> &states) {
    if (static_cast<int>(states.size()) != cfg.n)
        throw ConfigError("read_closed_form needs one state per sub-cell");
    std::vector<double> m;
    for (const auto &st : states)
        m.push_back(memristance(st, cfg.device));
    return generalized_vout(m, cfg.r_sub, cfg.r_load, cfg.v_read);
}

// Characterization data for the stock sub-cell builds: settled device
// memristance per written digit, measured with the series resistance that
// column was built with. Values keyed by that resistance.
double digit_state_ohms(double r_sub, int digit, int m_levels) {
    if (m_levels != 3)
        throw ConfigError("no bundled device states for m = " +
                          std::to_string(m_levels) +
                          " levels (data exists for m = 3)");
    static const struct {
        double r;
        double ohms[3]; // digit 0, 1, 2
    } table[] = {
        {20.0, {232.068, 918.906, 1537996.116}},
        {60.0, {232.132, 749.831, 498863.843}},
        {180.0, {233.760, 463.077, 26853.357}},
    };
    if (digit < 0 || digit > 2)
        throw ConfigError("no bundled device state for digit " +
                          std::to_string(digit));
    for (const auto &row : table)
        if (std::fabs(r_sub - row.r) <= 1e-9 * row.r)
            return row.ohms[digit];
    throw ConfigError("no bundled device states for r_sub = " + fmt_g(r_sub) +
                      " (data exists for 20, 60, 180)");
}

} // namespace memcell
