#include <cmath>

#include "device.h"
#include "doctest.h"
#include "errors.h"
#include "golden_data.h"

using namespace memcell;

static DeviceParams stock() { return DeviceParams{}; }

TEST_CASE("window vanishes at the bounds and peaks at the midpoint") {
    for (int p = 1; p <= 4; ++p) {
        CHECK(window(0.0, p) == 0.0);
        CHECK(window(1.0, p) == 0.0);
        CHECK(window(0.5, p) == 1.0);
    }
    CHECK(window(0.25, 2) == doctest::Approx(0.9375).epsilon(1e-15));
    for (double x = 0.0; x <= 0.5; x += 0.01)
        CHECK(window(x, 2) == doctest::Approx(window(1.0 - x, 2)));
}

TEST_CASE("memristance interpolates between the bounds") {
    const DeviceParams p = stock();
    CHECK(memristance({1.0, 0.0}, p) == 100.0);
    CHECK(memristance({0.0, 0.0}, p) == 2e6);
    CHECK(memristance({0.5, 0.0}, p) == doctest::Approx(1000050.0));
    for (double x = 0.05; x < 1.0; x += 0.05) {
        const DeviceState s{x, 0.0};
        const DeviceState back = state_for_resistance(memristance(s, p), p);
        CHECK(back.x == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("state_for_resistance rejects out-of-range targets") {
    const DeviceParams p = stock();
    CHECK_THROWS_AS(state_for_resistance(50.0, p), ConfigError);
    CHECK_THROWS_AS(state_for_resistance(3e6, p), ConfigError);
    CHECK(state_for_resistance(100.0, p).x == 1.0);
    CHECK(state_for_resistance(2e6, p).x == 0.0);
}

TEST_CASE("no drift at or below the voltage threshold") {
    const DeviceParams p = stock();
    for (double v : {0.0, 0.05, 0.1, 0.15, -0.15}) {
        CHECK(drift_rate({0.5, 0.0}, v, p) == 0.0);
        const DeviceState after = step({0.37, 0.0}, v, 1e-10, p);
        CHECK(after.x == 0.37);
    }
    CHECK(drift_rate({0.5, 0.0}, 0.151, p) != 0.0);
}

TEST_CASE("drift rate at midpoint under full drive matches the reference") {
    const double rate = drift_rate({0.5, 0.0}, 3.0, stock());
    CHECK(rate ==
          doctest::Approx(golden::kDriftRateMid3V).epsilon(1e-12));
}

TEST_CASE("positive drive raises resistance, negative drive lowers it") {
    const DeviceParams p = stock();
    DeviceState s{0.5, 0.0};
    const DeviceState up = step(s, 3.0, 1e-9, p);
    CHECK(up.x < s.x); // lower x means higher resistance
    CHECK(memristance(up, p) > memristance(s, p));
    const DeviceState down = step(s, -3.0, 1e-9, p);
    CHECK(down.x > s.x);
    CHECK(memristance(down, p) < memristance(s, p));
}

TEST_CASE("step clamps the state to [0, 1]") {
    DeviceParams p = stock();
    p.mobility = 1e12; // force a huge move in one step
    const DeviceState hi = step({0.98, 0.0}, -3.0, 1e-9, p);
    CHECK(hi.x <= 1.0);
    const DeviceState lo = step({0.02, 0.0}, 3.0, 1e-9, p);
    CHECK(lo.x >= 0.0);
    CHECK_THROWS_AS(step({0.5, 0.0}, 1.0, 0.0, p), ConfigError);
}

TEST_CASE("halving dt moves the integrated state by less than 1e-6") {
    const DeviceParams p = stock();
    const double duration = 100e-9;
    for (double v : {-3.0, 1.5, 3.0}) {
        DeviceState a = state_for_resistance(232.068, p);
        DeviceState b = a;
        const int n = 1000;
        for (int i = 0; i < n; ++i)
            a = step(a, v, duration / n, p);
        for (int i = 0; i < 2 * n; ++i)
            b = step(b, v, duration / (2 * n), p);
        CHECK(std::fabs(a.x - b.x) < 1e-6);
    }
}

TEST_CASE("end state is monotone in the drift gain") {
    DeviceParams p = stock();
    double prev_m = 0.0;
    for (double gain : {1e7, 3e7, 1e8, 3e8}) {
        p.mobility = gain;
        DeviceState s = state_for_resistance(232.068, p);
        for (int i = 0; i < 1000; ++i)
            s = step(s, 1.5, 1e-10, p);
        const double m = memristance(s, p);
        CHECK(m > prev_m);
        prev_m = m;
    }
}

TEST_CASE("calibration reproduces the stock recipe gain") {
    const DeviceParams p = stock();
    const double gain = calibrate_drift(p, 232.068, 918.906, 1.5, 100e-9);
    CHECK(gain == doctest::Approx(golden::kCalibratedGain).epsilon(1e-3));

    DeviceParams cal = p;
    cal.mobility = gain;
    DeviceState s = state_for_resistance(232.068, cal);
    for (int i = 0; i < 1000; ++i)
        s = step(s, 1.5, 100e-9 / 1000, cal);
    CHECK(memristance(s, cal) ==
          doctest::Approx(918.906).epsilon(1e-3));
}

TEST_CASE("calibration degenerate and failure modes") {
    const DeviceParams p = stock();
    CHECK(calibrate_drift(p, 500.0, 500.0, 1.5, 100e-9) == 1.0);
    // positive drive can only raise resistance; a lower target can't bracket
    CHECK_THROWS_AS(calibrate_drift(p, 500.0, 200.0, 1.5, 100e-9),
                    SimulationError);
    CHECK_THROWS_AS(calibrate_drift(p, 232.068, 918.906, 0.1, 100e-9),
                    ConfigError); // amplitude below threshold
    CHECK_THROWS_AS(calibrate_drift(p, 232.068, 918.906, 1.5, 0.0),
                    ConfigError);
    CHECK_THROWS_AS(calibrate_drift(p, 50.0, 918.906, 1.5, 100e-9),
                    ConfigError); // from below r_on
}

TEST_CASE("device parameter validation") {
    DeviceParams p = stock();
    CHECK_NOTHROW(validate(p));
    p.r_on = 0.0;
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = stock();
    p.r_off = 50.0;
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = stock();
    p.polarity = 0;
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = stock();
    p.window_exponent = 0;
    CHECK_THROWS_AS(validate(p), ConfigError);
}
