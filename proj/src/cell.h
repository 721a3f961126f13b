#pragma once

#include <string>
#include <vector>

#include "circuit.h"
#include "device.h"

namespace memcell {

// Complete description of one n-sub-cell memory cell plus solver settings.
// Defaults describe the stock three-sub-cell build this tool ships data for.
struct CellConfig {
    int n = 3;
    int m = 3; // levels per sub-cell; digit strings cap this at 10

    double v_max = 3.0;
    double v_read = 0.1;
    double t_reset = 100e-9;
    double t_write = 100e-9;
    double t_read = 50e-9;
    double dt = 0.1e-9;

    std::vector<double> r_sub{20.0, 60.0, 180.0};
    double r_load = 20.0;
    std::string topology = "tee"; // or "ladder5" (read-mode analyses only)

    DeviceParams device;
    bool mobility_auto = false; // resolve the gain from the stock recipe
    double m_initial = 232.068; // device memristance at cycle start, ohms

    double epsilon_closed_form = 1e-9;
    double epsilon_transient = 0.005;
};

void validate(const CellConfig &cfg);

// Copy with mobility_auto resolved to a numeric gain via calibrate_drift on
// the stock recipe (232.068 -> 918.906 ohms, 1.5 V, 100 ns).
CellConfig resolve(const CellConfig &cfg);

struct WritePattern {
    std::vector<int> digits; // leftmost digit = sub-cell 1

    static WritePattern parse(const std::string &text, const CellConfig &cfg);
    std::string str() const;
};

double digit_voltage(int d, const CellConfig &cfg);

// Pulse timeline for one cycle: reset, then write, then read, back to back.
// Ports not active in a phase sit at 0 V.
struct Schedule {
    double t_reset_end = 0.0;
    double t_write_end = 0.0;
    double t_end = 0.0;
    std::map<std::string, Waveform> port_waves; // keyed by source name
};

// write_scale, when non-empty, multiplies each sub-cell's write amplitude
// (perturbation studies). Reset and read amplitudes are never scaled.
Schedule make_schedule(const WritePattern &pat, const CellConfig &cfg,
                       const std::vector<double> &write_scale = {});

// Node and element naming (deterministic):
//   ground "gnd"; read rail "rail_read"; output "out"; reset rail
//   "rail_reset"; write ports "w1".."wn"; sub-cell i internals "s<i>_a",
//   "s<i>_b" (and "s<i>_c" for ladder5). Sources "Vr", "Vs", "Vw1".."Vwn";
//   devices "m1".."mn".
// "tee" wires, per sub-cell i with resistance R:
//   rail_read -R- a, w<i> -R- a, rail_reset -R- b, b -R- out, device a->b.
// "ladder5" is a five-resistor read-equivalent form (no write/reset ports):
//   rail_read -R- a, a -R- c, b -R- c, c -R- gnd, b -R- out, device a->b.
// r_load always ties "out" to ground.
Netlist build_netlist(const CellConfig &cfg);

struct CycleResult {
    double v_out = 0.0;
    std::vector<DeviceState> final_states; // sub-cell order
    std::vector<double> read_start_m;      // memristance entering the read
    double read_drift_rel_max = 0.0;       // worst |dM|/M across the read
    double kcl_rel_max = 0.0;
};

// Full reset/write/read transient. v_out is the mean output-node voltage
// over the final 80% of the read window. Pass trace_out to capture every
// solver step.
CycleResult run_cycle(const CellConfig &cfg, const WritePattern &pat,
                      const std::vector<double> &write_scale = {},
                      Trace *trace_out = nullptr);

// Apply the reset phase `times` times in a row from the given states.
std::vector<DeviceState> apply_reset(const CellConfig &cfg,
                                     const std::vector<DeviceState> &from,
                                     int times);

// Closed-form readout of given device states under this cell's resistors.
double read_closed_form(const CellConfig &cfg,
                        const std::vector<DeviceState> &states);

// Bundled characterization data: per-digit device memristance, keyed by the
// sub-cell series resistance it was measured with. Throws ConfigError when
// no data exists for (r_sub, digit).
double digit_state_ohms(double r_sub, int digit, int m_levels);

} // namespace memcell
