#include "circuit.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "errors.h"
#include "textio.h"

namespace memcell {

double Waveform::at(double t) const {
    for (const auto &s : segments)
        if (t >= s.t0 && t < s.t1)
            return s.volts;
    return 0.0;
}

int Netlist::add_node(const std::string &name) {
    for (size_t i = 0; i < node_names.size(); ++i)
        if (node_names[i] == name)
            return static_cast<int>(i);
    node_names.push_back(name);
    return static_cast<int>(node_names.size()) - 1;
}

int Netlist::node(const std::string &name) const {
    for (size_t i = 0; i < node_names.size(); ++i)
        if (node_names[i] == name)
            return static_cast<int>(i);
    throw ConfigError("no node named '" + name + "'");
}

LinearSystem assemble(const Netlist &nl, const MemristanceSnapshot &snapshot,
                      double t) {
    const int nn = nl.node_count() - 1; // ground eliminated
    const int ns = static_cast<int>(nl.sources.size());
    LinearSystem sys;
    sys.n = nn + ns;
    sys.a.assign(static_cast<size_t>(sys.n) * sys.n, 0.0);
    sys.b.assign(sys.n, 0.0);
    sys.labels.reserve(sys.n);
    for (int k = 1; k < nl.node_count(); ++k)
        sys.labels.push_back("node " + nl.node_names[k]);
    for (const auto &src : nl.sources)
        sys.labels.push_back("source " + src.name + " current");

    auto at = [&](int r, int c) -> double & {
        return sys.a[static_cast<size_t>(r) * sys.n + c];
    };
    auto stamp_conductance = [&](int a, int b, double ohms,
                                 const std::string &what) {
        if (!(ohms > 0.0))
            throw ConfigError(what + ": resistance must be positive, got " +
                              fmt_g(ohms));
        const double g = 1.0 / ohms;
        if (a > 0)
            at(a - 1, a - 1) += g;
        if (b > 0)
            at(b - 1, b - 1) += g;
        if (a > 0 && b > 0) {
            at(a - 1, b - 1) -= g;
            at(b - 1, a - 1) -= g;
        }
    };

    for (const auto &r : nl.resistors)
        stamp_conductance(r.a, r.b, r.ohms, "resistor " + r.name);
    for (const auto &m : nl.memristors) {
        auto it = snapshot.find(m.id);
        if (it == snapshot.end())
            throw ConfigError("no memristance snapshot for device '" + m.id +
                              "'");
        stamp_conductance(m.plus, m.minus, it->second, "device " + m.id);
    }
    for (int s = 0; s < ns; ++s) {
        const auto &src = nl.sources[s];
        const int row = nn + s;
        if (src.plus > 0) {
            at(src.plus - 1, row) += 1.0;
            at(row, src.plus - 1) += 1.0;
        }
        if (src.minus > 0) {
            at(src.minus - 1, row) -= 1.0;
            at(row, src.minus - 1) -= 1.0;
        }
        sys.b[row] = src.wave.at(t);
    }
    return sys;
}

// Dense LU with partial pivoting. Systems stay tiny; owning the loop buys
// diagnostics that can name the failing unknown.
static std::vector<double> lu_solve(const LinearSystem &sys) {
    const int n = sys.n;
    std::vector<double> a(sys.a);
    std::vector<double> x(sys.b);
    std::vector<int> perm(n);
    std::vector<double> row_scale(n, 0.0);
    for (int i = 0; i < n; ++i) {
        perm[i] = i;
        for (int j = 0; j < n; ++j)
            row_scale[i] = std::max(
                row_scale[i], std::fabs(sys.a[static_cast<size_t>(i) * n + j]));
    }

    auto at = [&](int r, int c) -> double & {
        return a[static_cast<size_t>(r) * n + c];
    };

    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(at(i, k)) > std::fabs(at(piv, k)))
                piv = i;
        const double scale = row_scale[perm[piv]];
        if (!(std::fabs(at(piv, k)) > 1e-14 * scale))
            throw SimulationError("singular system: no usable pivot for " +
                                  sys.labels[k] +
                                  " (floating or contradictory constraint)");
        if (piv != k) {
            for (int j = 0; j < n; ++j)
                std::swap(at(piv, j), at(k, j));
            std::swap(x[piv], x[k]);
            std::swap(perm[piv], perm[k]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = at(i, k) / at(k, k);
            at(i, k) = f;
            for (int j = k + 1; j < n; ++j)
                at(i, j) -= f * at(k, j);
            x[i] -= f * x[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j)
            x[i] -= at(i, j) * x[j];
        x[i] /= at(i, i);
    }

    double bnorm = 0.0, rnorm = 0.0;
    for (int i = 0; i < n; ++i)
        bnorm = std::max(bnorm, std::fabs(sys.b[i]));
    for (int i = 0; i < n; ++i) {
        double r = -sys.b[i];
        for (int j = 0; j < n; ++j)
            r += sys.a[static_cast<size_t>(i) * n + j] * x[j];
        rnorm = std::max(rnorm, std::fabs(r));
    }
    if (rnorm > 1e-10 * bnorm)
        throw SimulationError("linear solve residual " + fmt_g(rnorm) +
                              " exceeds bound " + fmt_g(1e-10 * bnorm));
    return x;
}

Solution solve(const Netlist &nl, const MemristanceSnapshot &snapshot,
               const LinearSystem &sys) {
    const int nn = nl.node_count() - 1;
    const std::vector<double> x = lu_solve(sys);

    Solution sol;
    sol.node_v.assign(nl.node_count(), 0.0);
    for (int k = 1; k < nl.node_count(); ++k)
        sol.node_v[k] = x[k - 1];

    // The MNA unknown is the current leaving the plus node through the
    // source; flip it so positive means delivered into the network.
    sol.source_i.resize(nl.sources.size());
    for (size_t s = 0; s < nl.sources.size(); ++s)
        sol.source_i[s] = -x[nn + static_cast<int>(s)];

    std::vector<double> inflow(nl.node_count(), 0.0); // signed current sum
    std::vector<double> infmag(nl.node_count(), 0.0); // magnitude sum
    auto account = [&](int a, int b, double amps) {
        inflow[a] -= amps;
        inflow[b] += amps;
        infmag[a] += std::fabs(amps);
        infmag[b] += std::fabs(amps);
    };

    for (const auto &r : nl.resistors) {
        const double v = sol.node_v[r.a] - sol.node_v[r.b];
        const double i = v / r.ohms;
        sol.branches.push_back({r.name, v, i});
        account(r.a, r.b, i);
    }
    for (const auto &m : nl.memristors) {
        const double v = sol.node_v[m.plus] - sol.node_v[m.minus];
        const double i = v / snapshot.at(m.id);
        sol.branches.push_back({m.id, v, i});
        account(m.plus, m.minus, i);
    }
    for (size_t s = 0; s < nl.sources.size(); ++s) {
        const auto &src = nl.sources[s];
        const double v = sol.node_v[src.plus] - sol.node_v[src.minus];
        const double i = -sol.source_i[s]; // plus -> minus through the source
        sol.branches.push_back({src.name, v, i});
        account(src.plus, src.minus, i);
    }

    double worst = 0.0;
    int worst_node = 0;
    for (int k = 1; k < nl.node_count(); ++k) {
        const double rel = std::fabs(inflow[k]) / (infmag[k] + 1e-12);
        if (rel > worst) {
            worst = rel;
            worst_node = k;
        }
    }
    sol.kcl_rel = worst;
    if (worst > 1e-9)
        throw SimulationError("KCL residual " + fmt_g(worst) + " at node " +
                              nl.node_names[worst_node]);
    return sol;
}

Solution solve_dc(const Netlist &nl, const MemristanceSnapshot &snapshot,
                  double t) {
    return solve(nl, snapshot, assemble(nl, snapshot, t));
}

TransientResult transient(const Netlist &nl, const DeviceMap &devices,
                          double t_end, double dt, bool record_trace,
                          double t0) {
    if (!(dt > 0.0))
        throw ConfigError("transient dt must be positive");
    if (!(t_end > t0))
        throw ConfigError("transient end time must be past its start");

    for (const auto &m : nl.memristors)
        if (devices.find(m.id) == devices.end())
            throw ConfigError("no device state supplied for '" + m.id + "'");

    DeviceMap state(devices);

    TransientResult res;
    for (int k = 1; k < nl.node_count(); ++k)
        res.trace.node_names.push_back(nl.node_names[k]);
    for (const auto &m : nl.memristors)
        res.trace.device_ids.push_back(m.id);

    const long steps = std::lround((t_end - t0) / dt);
    if (steps < 1)
        throw ConfigError("transient window shorter than one step");
    if (record_trace)
        res.trace.rows.reserve(steps);

    const size_t nd = nl.memristors.size();
    std::vector<double> rate1(nd), x_pred(nd);

    for (long si = 0; si < steps; ++si) {
        const double t = t0 + si * dt;
        // Sources are piecewise constant; sampling mid-step keeps a step
        // that ends exactly on a pulse edge inside its own segment.
        const double t_sample = t + 0.5 * dt;

        MemristanceSnapshot snap;
        for (const auto &m : nl.memristors) {
            const auto &dev = state.at(m.id);
            snap[m.id] = memristance(dev.first, dev.second);
        }

        Solution sol;
        try {
            sol = solve_dc(nl, snap, t_sample);
        } catch (const SimulationError &e) {
            throw SimulationError(std::string(e.what()) + " at t = " +
                                  fmt_g(t) + " s");
        }
        res.trace.kcl_rel_max = std::max(res.trace.kcl_rel_max, sol.kcl_rel);

        if (record_trace) {
            TraceRow row;
            row.t = t;
            row.node_v.assign(sol.node_v.begin() + 1, sol.node_v.end());
            for (const auto &m : nl.memristors) {
                const auto &dev = state.at(m.id);
                row.dev_x.push_back(dev.first.x);
                row.dev_m.push_back(snap[m.id]);
            }
            res.trace.rows.push_back(std::move(row));
        }

        // Heun coupling: predict each state under the start-of-step solve,
        // re-solve with the predicted memristances, then advance on the
        // averaged drift. Keeps the final state second-order in dt.
        MemristanceSnapshot snap_p;
        bool moving = false;
        for (size_t di = 0; di < nd; ++di) {
            const auto &m = nl.memristors[di];
            auto &dev = state.at(m.id);
            const double v = sol.node_v[m.plus] - sol.node_v[m.minus];
            rate1[di] = drift_rate(dev.first, v, dev.second);
            moving = moving || rate1[di] != 0.0;
            DeviceState pred = dev.first;
            pred.x = std::clamp(pred.x + dt * rate1[di], 0.0, 1.0);
            x_pred[di] = pred.x;
            snap_p[m.id] = memristance(pred, dev.second);
        }

        if (moving) {
            // With every rate zero the predictor equals the state and the
            // second solve would reproduce the first, so it is skipped.
            Solution sol2;
            try {
                sol2 = solve_dc(nl, snap_p, t_sample);
            } catch (const SimulationError &e) {
                throw SimulationError(std::string(e.what()) + " at t = " +
                                      fmt_g(t) + " s");
            }
            res.trace.kcl_rel_max =
                std::max(res.trace.kcl_rel_max, sol2.kcl_rel);
            for (size_t di = 0; di < nd; ++di) {
                const auto &m = nl.memristors[di];
                auto &dev = state.at(m.id);
                DeviceState pred = dev.first;
                pred.x = x_pred[di];
                const double v2 =
                    sol2.node_v[m.plus] - sol2.node_v[m.minus];
                const double rate2 = drift_rate(pred, v2, dev.second);
                dev.first.x = std::clamp(
                    dev.first.x + 0.5 * dt * (rate1[di] + rate2), 0.0, 1.0);
            }
        }
        for (auto &kv : state)
            kv.second.first.t_last = t + dt;
    }

    for (auto &kv : state)
        res.final_states[kv.first] = kv.second.first;
    return res;
}

void Trace::write_csv(const std::string &path) const {
    std::string out = "t_s";
    for (const auto &name : node_names)
        out += ",node_" + name + "_V";
    for (const auto &id : device_ids)
        out += ",device_" + id + "_x";
    for (const auto &id : device_ids)
        out += ",device_" + id + "_ohms";
    out += "\n";
    for (const auto &row : rows) {
        out += fmt_g(row.t);
        for (double v : row.node_v)
            out += "," + fmt_g(v);
        for (double v : row.dev_x)
            out += "," + fmt_g(v);
        for (double v : row.dev_m)
            out += "," + fmt_g(v);
        out += "\n";
    }
    write_file(path, out);
}

} // namespace memcell
