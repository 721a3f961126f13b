#pragma once

namespace memcell {

struct DeviceParams {
    double r_on = 100.0;       // low-resistance bound, ohms
    double r_off = 2.0e6;      // high-resistance bound, ohms
    double v_threshold = 0.15; // no drift at or below this magnitude, volts
    double mobility = 6.0e7;   // drift gain; see calibrate_drift
    int window_exponent = 2;
    int polarity = 1;          // +1: positive applied voltage raises resistance
};

// x = 1 gives r_on, x = 0 gives r_off. Kept in [0,1] by step().
struct DeviceState {
    double x = 0.0;
    double t_last = 0.0;
};

void validate(const DeviceParams &p);

double memristance(const DeviceState &s, const DeviceParams &p);

// 1 - (2x-1)^(2*exponent): zero at both state bounds, peak 1 at x = 0.5,
// symmetric about the midpoint.
double window(double x, int exponent);

// dx/dt in 1/seconds. Zero when |v| <= v_threshold; otherwise proportional
// to the device current v/M(x), boundary-suppressed by the window.
double drift_rate(const DeviceState &s, double v_applied,
                  const DeviceParams &p);

// One fixed-size RK4 step with v held constant; result clamped to [0,1].
DeviceState step(const DeviceState &s, double v_applied, double dt,
                 const DeviceParams &p);

// Inverse of memristance. Rejects targets outside [r_on, r_off].
DeviceState state_for_resistance(double m_target, const DeviceParams &p);

// Gain such that one pulse (amplitude, duration) moves a bare device from
// m_from to m_to. Bisection to 1e-6 relative on the gain; the transient
// uses 1000 fixed RK4 steps over the duration.
double calibrate_drift(const DeviceParams &p, double m_from, double m_to,
                       double amplitude, double duration);

} // namespace memcell
