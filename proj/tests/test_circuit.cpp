#include <cmath>

#include "circuit.h"
#include "doctest.h"
#include "errors.h"

using namespace memcell;

static Waveform dc(double volts) {
    return {{{0.0, 1.0, volts}}};
}

TEST_CASE("waveform lookup picks the segment containing t") {
    Waveform w{{{0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}}};
    CHECK(w.at(0.0) == 2.0);
    CHECK(w.at(0.999) == 2.0);
    CHECK(w.at(1.0) == 5.0); // segments are [t0, t1)
    CHECK(w.at(2.5) == 5.0);
    CHECK(w.at(3.0) == 0.0);
    CHECK(w.at(-0.1) == 0.0);
}

TEST_CASE("voltage divider solves to the exact ratio") {
    Netlist nl;
    const int in = nl.add_node("in");
    const int mid = nl.add_node("mid");
    nl.resistors.push_back({"R1", in, mid, 300.0});
    nl.resistors.push_back({"R2", mid, 0, 100.0});
    nl.sources.push_back({"V", in, 0, dc(2.0)});

    const Solution s = solve_dc(nl, {}, 0.0);
    CHECK(s.node_v[in] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.node_v[mid] == doctest::Approx(0.5).epsilon(1e-12));
    // 5 mA leaves the plus terminal and returns through ground
    CHECK(s.source_i[0] == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(s.kcl_rel <= 1e-9);
}

TEST_CASE("series and parallel combinations match closed forms") {
    // V - R1 - a - (R2 parallel R3) - gnd
    Netlist nl;
    const int in = nl.add_node("in");
    const int a = nl.add_node("a");
    nl.resistors.push_back({"R1", in, a, 120.0});
    nl.resistors.push_back({"R2", a, 0, 50.0});
    nl.resistors.push_back({"R3", a, 0, 75.0});
    nl.sources.push_back({"V", in, 0, dc(1.0)});

    const double rp = 1.0 / (1.0 / 50.0 + 1.0 / 75.0);
    const Solution s = solve_dc(nl, {}, 0.0);
    CHECK(s.node_v[a] ==
          doctest::Approx(rp / (120.0 + rp)).epsilon(1e-9));
    CHECK(s.source_i[0] ==
          doctest::Approx(1.0 / (120.0 + rp)).epsilon(1e-9));
}

TEST_CASE("solution scales linearly with the source") {
    Netlist nl;
    const int in = nl.add_node("in");
    const int a = nl.add_node("a");
    const int b = nl.add_node("b");
    nl.resistors.push_back({"R1", in, a, 10.0});
    nl.resistors.push_back({"R2", a, b, 20.0});
    nl.resistors.push_back({"R3", b, 0, 30.0});
    nl.resistors.push_back({"R4", a, 0, 40.0});
    nl.sources.push_back({"V", in, 0, dc(1.0)});
    const Solution s1 = solve_dc(nl, {}, 0.0);

    nl.sources[0].wave = dc(7.5);
    const Solution s2 = solve_dc(nl, {}, 0.0);
    for (size_t i = 1; i < s1.node_v.size(); ++i)
        CHECK(s2.node_v[i] ==
              doctest::Approx(7.5 * s1.node_v[i]).epsilon(1e-9));
}

TEST_CASE("two sources superpose") {
    Netlist nl;
    const int p = nl.add_node("p");
    const int q = nl.add_node("q");
    const int m = nl.add_node("m");
    nl.resistors.push_back({"R1", p, m, 11.0});
    nl.resistors.push_back({"R2", q, m, 22.0});
    nl.resistors.push_back({"R3", m, 0, 33.0});
    nl.sources.push_back({"Va", p, 0, dc(1.0)});
    nl.sources.push_back({"Vb", q, 0, dc(0.0)});

    const Solution sa = solve_dc(nl, {}, 0.0);
    nl.sources[0].wave = dc(0.0);
    nl.sources[1].wave = dc(1.0);
    const Solution sb = solve_dc(nl, {}, 0.0);
    nl.sources[0].wave = dc(2.0);
    nl.sources[1].wave = dc(-3.0);
    const Solution s = solve_dc(nl, {}, 0.0);
    CHECK(s.node_v[m] ==
          doctest::Approx(2.0 * sa.node_v[m] - 3.0 * sb.node_v[m])
              .epsilon(1e-9));
}

TEST_CASE("memristive branch is stamped from the snapshot") {
    Netlist nl;
    const int in = nl.add_node("in");
    const int mid = nl.add_node("mid");
    nl.resistors.push_back({"R1", in, mid, 100.0});
    nl.memristors.push_back({"m1", mid, 0});
    nl.sources.push_back({"V", in, 0, dc(1.0)});

    const Solution s = solve_dc(nl, {{"m1", 400.0}}, 0.0);
    CHECK(s.node_v[mid] == doctest::Approx(0.8).epsilon(1e-12));
    bool found = false;
    for (const auto &br : s.branches)
        if (br.name == "m1") {
            found = true;
            CHECK(br.volts == doctest::Approx(0.8).epsilon(1e-12));
            CHECK(br.amps == doctest::Approx(0.002).epsilon(1e-12));
        }
    CHECK(found);
    CHECK_THROWS_AS(solve_dc(nl, {}, 0.0), ConfigError); // missing snapshot
}

TEST_CASE("floating subnetwork is reported as singular") {
    Netlist nl;
    const int in = nl.add_node("in");
    const int f = nl.add_node("f");
    const int g = nl.add_node("g");
    nl.resistors.push_back({"Rmain", in, 0, 10.0});
    nl.resistors.push_back({"Rfloat", f, g, 10.0});
    nl.sources.push_back({"V", in, 0, dc(1.0)});
    CHECK_THROWS_AS(solve_dc(nl, {}, 0.0), SimulationError);
}

TEST_CASE("non-positive resistance is rejected at assembly") {
    Netlist nl;
    const int in = nl.add_node("in");
    nl.resistors.push_back({"Rbad", in, 0, 0.0});
    nl.sources.push_back({"V", in, 0, dc(1.0)});
    CHECK_THROWS_AS(assemble(nl, {}, 0.0), ConfigError);
}

TEST_CASE("read-level excitation does not move the device state") {
    Netlist nl;
    const int in = nl.add_node("in");
    const int mid = nl.add_node("mid");
    nl.resistors.push_back({"R1", in, mid, 20.0});
    nl.memristors.push_back({"m1", mid, 0});
    nl.sources.push_back({"V", in, 0, {{{0.0, 50e-9, 0.1}}}});

    DeviceMap devs;
    const DeviceParams p;
    devs["m1"] = {state_for_resistance(500.0, p), p};
    const double x0 = devs["m1"].first.x;

    const TransientResult r = transient(nl, devs, 50e-9, 0.1e-9, false);
    CHECK(r.final_states.at("m1").x == x0); // below threshold: no drift
    CHECK(r.trace.rows.empty());
}

TEST_CASE("strong drive moves the device and the trace records it") {
    Netlist nl;
    const int in = nl.add_node("in");
    nl.memristors.push_back({"m1", in, 0});
    nl.sources.push_back({"V", in, 0, {{{0.0, 100e-9, 1.5}}}});

    DeviceMap devs;
    const DeviceParams p;
    devs["m1"] = {state_for_resistance(232.068, p), p};

    const TransientResult r = transient(nl, devs, 100e-9, 0.1e-9, true);
    CHECK(r.trace.rows.size() == 1000);
    CHECK(r.trace.rows.front().t == 0.0);
    CHECK(r.trace.rows.back().t ==
          doctest::Approx(99.9e-9).epsilon(1e-9));
    // resistance must have grown under the positive drive
    const double m_final =
        memristance(r.final_states.at("m1"), p);
    CHECK(m_final > 232.068);
    CHECK(r.trace.kcl_rel_max <= 1e-9);
    // recorded device track is the pre-step state
    CHECK(r.trace.rows.front().dev_m[0] ==
          doctest::Approx(232.068).epsilon(1e-12));
}

TEST_CASE("transient honors a nonzero start time") {
    Netlist nl;
    const int in = nl.add_node("in");
    nl.resistors.push_back({"R1", in, 0, 10.0});
    nl.memristors.push_back({"m1", in, 0});
    nl.sources.push_back({"V", in, 0, {{{10e-9, 20e-9, 1.0}}}});

    DeviceMap devs;
    const DeviceParams p;
    devs["m1"] = {state_for_resistance(1000.0, p), p};

    const TransientResult r =
        transient(nl, devs, 20e-9, 1e-9, true, 10e-9);
    CHECK(r.trace.rows.size() == 10);
    CHECK(r.trace.rows.front().t == doctest::Approx(10e-9));
    // the waveform is active over the whole recorded span
    for (const auto &row : r.trace.rows)
        CHECK(row.node_v[in - 1] == doctest::Approx(1.0));
}

TEST_CASE("transient validation errors") {
    Netlist nl;
    const int in = nl.add_node("in");
    nl.memristors.push_back({"m1", in, 0});
    nl.sources.push_back({"V", in, 0, dc(1.0)});
    CHECK_THROWS_AS(transient(nl, {}, 1e-9, 1e-10, false),
                    ConfigError); // device map misses m1
    DeviceMap devs;
    const DeviceParams p;
    devs["m1"] = {DeviceState{0.5, 0.0}, p};
    CHECK_THROWS_AS(transient(nl, devs, 1e-9, 0.0, false), ConfigError);
    CHECK_THROWS_AS(transient(nl, devs, 0.0, 1e-10, false), ConfigError);
}
