#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "device.h"

namespace memcell {

// Value in volts over [t0, t1). Outside every segment a source reads 0.
struct PulseSegment {
    double t0 = 0.0;
    double t1 = 0.0;
    double volts = 0.0;
};

struct Waveform {
    std::vector<PulseSegment> segments;
    double at(double t) const;
};

// Node 0 is ground. Memristive branches are stamped from an externally
// supplied memristance snapshot so that a transient can freeze them per step.
struct Netlist {
    std::vector<std::string> node_names{"gnd"};

    struct Resistor {
        std::string name;
        int a = 0, b = 0;
        double ohms = 0.0;
    };
    struct Memristor {
        std::string id;
        int plus = 0, minus = 0; // positive applied voltage = v(plus)-v(minus)
    };
    struct Source {
        std::string name;
        int plus = 0, minus = 0;
        Waveform wave;
    };

    std::vector<Resistor> resistors;
    std::vector<Memristor> memristors;
    std::vector<Source> sources;

    int add_node(const std::string &name);
    int node(const std::string &name) const; // throws ConfigError if absent
    int node_count() const { return static_cast<int>(node_names.size()); }
    int unknowns() const {
        return node_count() - 1 + static_cast<int>(sources.size());
    }
};

struct LinearSystem {
    int n = 0;
    std::vector<double> a; // row-major n*n
    std::vector<double> b;
    std::vector<std::string> labels; // one per unknown, for diagnostics
};

struct Branch {
    std::string name;
    double volts = 0.0; // drop across the element
    double amps = 0.0;  // through the element, positive a->b (plus->minus)
};

struct Solution {
    std::vector<double> node_v;  // per node, [0] = 0
    std::vector<double> source_i; // out of the plus terminal into the network
    std::vector<Branch> branches; // resistors, then memristors, then sources
    double kcl_rel = 0.0; // worst |sum i| / (sum |i| + 1e-12) over nodes
};

using MemristanceSnapshot = std::map<std::string, double>;
using DeviceMap = std::map<std::string, std::pair<DeviceState, DeviceParams>>;

LinearSystem assemble(const Netlist &nl, const MemristanceSnapshot &snapshot,
                      double t);
// Solves the assembled system, fills the branch map, audits KCL at every
// non-ground node (throws SimulationError past 1e-9 relative).
Solution solve(const Netlist &nl, const MemristanceSnapshot &snapshot,
               const LinearSystem &sys);
Solution solve_dc(const Netlist &nl, const MemristanceSnapshot &snapshot,
                  double t);

struct TraceRow {
    double t = 0.0;
    std::vector<double> node_v; // non-ground nodes, index order
    std::vector<double> dev_x;  // netlist memristor order
    std::vector<double> dev_m;
};

struct Trace {
    std::vector<std::string> node_names; // non-ground, index order
    std::vector<std::string> device_ids;
    std::vector<TraceRow> rows;
    double kcl_rel_max = 0.0;
    void write_csv(const std::string &path) const;
};

struct TransientResult {
    Trace trace; // rows populated only when record_trace was set
    std::map<std::string, DeviceState> final_states;
};

/// Fixed-step loop: stamp memristors at their current state, solve, record,
// then advance each device with its branch voltage held constant over dt.
// Runs over [t0, t_end); waveforms use absolute time.
TransientResult transient(const Netlist &nl, const DeviceMap &devices,
                          double t_end, double dt, bool record_trace,
                          double t0 = 0.0);

} // namespace memcell
