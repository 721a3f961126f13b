#include "device.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.h"
#include "textio.h"

namespace memcell {

void validate(const DeviceParams &p) {
    if (!(p.r_on > 0.0))
        throw ConfigError("r_on must be positive, got " + fmt_g(p.r_on));
    if (!(p.r_off > p.r_on))
        throw ConfigError("r_off must exceed r_on (" + fmt_g(p.r_off) +
                          " vs " + fmt_g(p.r_on) + ")");
    if (!(p.v_threshold >= 0.0))
        throw ConfigError("v_threshold must be non-negative");
    if (!(p.mobility > 0.0))
        throw ConfigError("mobility_factor must be positive");
    if (p.window_exponent < 1)
        throw ConfigError("window_exponent must be at least 1");
    if (p.polarity != 1 && p.polarity != -1)
        throw ConfigError("polarity must be +1 or -1");
}

static double memristance_at(double x, const DeviceParams &p) {
    x = std::clamp(x, 0.0, 1.0);
    return p.r_on * x + p.r_off * (1.0 - x);
}

double memristance(const DeviceState &s, const DeviceParams &p) {
    return memristance_at(s.x, p);
}

double window(double x, int exponent) {
    const double t2 = (2.0 * x - 1.0) * (2.0 * x - 1.0);
    double w = 1.0;
    for (int i = 0; i < exponent; ++i)
        w *= t2; // exact integer power keeps the evaluation deterministic
    return 1.0 - w;
}

static double drift_at(double x, double v, const DeviceParams &p) {
    if (std::fabs(v) <= p.v_threshold)
        return 0.0;
    x = std::clamp(x, 0.0, 1.0); // RK4 stages may probe outside the interval
    const double i = v / memristance_at(x, p);
    return -p.polarity * p.mobility * i * window(x, p.window_exponent);
}

double drift_rate(const DeviceState &s, double v_applied,
                  const DeviceParams &p) {
    return drift_at(s.x, v_applied, p);
}

DeviceState step(const DeviceState &s, double v_applied, double dt,
                 const DeviceParams &p) {
    if (!(dt > 0.0))
        throw ConfigError("step dt must be positive");
    const double x = s.x;
    const double k1 = drift_at(x, v_applied, p);
    const double k2 = drift_at(x + 0.5 * dt * k1, v_applied, p);
    const double k3 = drift_at(x + 0.5 * dt * k2, v_applied, p);
    const double k4 = drift_at(x + dt * k3, v_applied, p);
    const double xn = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return {std::clamp(xn, 0.0, 1.0), s.t_last + dt};
}

DeviceState state_for_resistance(double m_target, const DeviceParams &p) {
    if (m_target < p.r_on)
        throw ConfigError("target resistance " + fmt_g(m_target) +
                          " is below r_on = " + fmt_g(p.r_on));
    if (m_target > p.r_off)
        throw ConfigError("target resistance " + fmt_g(m_target) +
                          " is above r_off = " + fmt_g(p.r_off));
    const double x = (p.r_off - m_target) / (p.r_off - p.r_on);
    return {std::clamp(x, 0.0, 1.0), 0.0};
}

double calibrate_drift(const DeviceParams &base, double m_from, double m_to,
                       double amplitude, double duration) {
    validate(base);
    if (!(duration > 0.0))
        throw ConfigError("calibration duration must be positive");
    if (std::fabs(amplitude) <= base.v_threshold)
        throw ConfigError("calibration amplitude " + fmt_g(amplitude) +
                          " does not exceed v_threshold = " +
                          fmt_g(base.v_threshold));
    state_for_resistance(m_from, base); // range checks
    state_for_resistance(m_to, base);

    const int steps = 1000;
    const double dt = duration / steps;
    auto end_m = [&](double gain) {
        DeviceParams p = base;
        p.mobility = gain;
        DeviceState s = state_for_resistance(m_from, p);
        for (int i = 0; i < steps; ++i)
            s = step(s, amplitude, dt, p);
        return memristance(s, p);
    };

    double lo = 1.0;
    if (m_from == m_to)
        return lo; // any gain satisfies a degenerate target

    // Sign of dM/dt under this drive; end_m is monotone in the gain along it.
    const double dir = (amplitude > 0.0 ? 1.0 : -1.0) * base.polarity;
    auto short_of = [&](double gain) { return (m_to - end_m(gain)) * dir > 0.0; };

    double hi = lo;
    if (short_of(lo)) {
        bool bracketed = false;
        for (int i = 0; i < 60 && !bracketed; ++i) {
            hi *= 10.0;
            bracketed = !short_of(hi);
        }
        if (!bracketed)
            throw SimulationError(
                "calibration found no bracketing gain: residual " +
                fmt_g(end_m(lo) - m_to) + " ohms at gain " + fmt_g(lo) +
                ", " + fmt_g(end_m(hi) - m_to) + " ohms at gain " + fmt_g(hi));
    } else {
        bool bracketed = false;
        for (int i = 0; i < 60 && !bracketed; ++i) {
            lo /= 10.0;
            bracketed = short_of(lo);
        }
        if (!bracketed)
            throw SimulationError(
                "calibration found no bracketing gain: residual " +
                fmt_g(end_m(lo) - m_to) + " ohms at gain " + fmt_g(lo) +
                ", " + fmt_g(end_m(hi) - m_to) + " ohms at gain " + fmt_g(hi));
    }

    while (hi - lo > 1e-6 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (short_of(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace memcell
