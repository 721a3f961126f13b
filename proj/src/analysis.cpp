#include "analysis.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "errors.h"
#include "readout.h"
#include "textio.h"

namespace memcell {

static std::vector<std::string> all_patterns(const CellConfig &cfg) {
    if (cfg.n * std::log(static_cast<double>(cfg.m)) > std::log(1e6))
        throw ConfigError("pattern space m^n exceeds 1e6; refusing to "
                          "enumerate");
    std::vector<std::string> out;
    std::string cur(cfg.n, '0');
    for (;;) {
        out.push_back(cur);
        int i = cfg.n - 1;
        while (i >= 0) {
            if (++cur[i] < '0' + cfg.m)
                break;
            cur[i] = '0';
            --i;
        }
        if (i < 0)
            break;
    }
    return out;
}

LevelTable enumerate_levels(const CellConfig &cfg0, LevelMode mode) {
    const CellConfig cfg = resolve(cfg0);
    validate(cfg);
    LevelTable t;
    t.source = (mode == LevelMode::ClosedForm) ? "closed-form" : "transient";
    t.v_read = cfg.v_read;
    for (const std::string &ps : all_patterns(cfg)) {
        const WritePattern pat = WritePattern::parse(ps, cfg);
        double v;
        if (mode == LevelMode::ClosedForm) {
            std::vector<double> m;
            for (int i = 0; i < cfg.n; ++i)
                m.push_back(
                    digit_state_ohms(cfg.r_sub[i], pat.digits[i], cfg.m));
            v = generalized_vout(m, cfg.r_sub, cfg.r_load, cfg.v_read);
        } else {
            v = run_cycle(cfg, pat).v_out;
        }
        t.rows.push_back({ps, v});
    }
    return t;
}

int count_distinct(const LevelTable &t, double epsilon_rel) {
    if (t.rows.empty())
        throw ConfigError("level table is empty");
    if (!(epsilon_rel >= 0.0))
        throw ConfigError("epsilon_rel must be non-negative");
    std::vector<double> v;
    for (const auto &r : t.rows)
        v.push_back(r.v_out);
    std::sort(v.begin(), v.end());
    int groups = 1;
    for (size_t i = 1; i < v.size(); ++i) {
        const double lo = v[i - 1], hi = v[i];
        const bool merge = (hi - lo) <= epsilon_rel * hi ||
                           (hi - lo) <= epsilon_rel * t.v_read;
        if (!merge)
            ++groups;
    }
    return groups;
}

static std::vector<LevelRow> rows_descending(const LevelTable &t) {
    std::vector<LevelRow> rows = t.rows;
    std::sort(rows.begin(), rows.end(),
              [](const LevelRow &a, const LevelRow &b) {
                  if (a.v_out != b.v_out)
                      return a.v_out > b.v_out;
                  return a.pattern < b.pattern;
              });
    return rows;
}

std::vector<GapEntry> adjacent_gaps(const LevelTable &t) {
    if (t.rows.empty())
        throw ConfigError("level table is empty");
    const std::vector<LevelRow> rows = rows_descending(t);
    std::vector<GapEntry> gaps;
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        const double hi = rows[i].v_out, lo = rows[i + 1].v_out;
        const double rel = hi > 0.0 ? 100.0 * (hi - lo) / hi : 0.0;
        gaps.push_back({rows[i].pattern, rows[i + 1].pattern, rel});
    }
    return gaps;
}

std::vector<GapEntry> closest_pairs(const LevelTable &t, int top_k) {
    if (top_k < 1)
        throw ConfigError("top_k must be at least 1");
    std::vector<GapEntry> gaps = adjacent_gaps(t);
    gaps.erase(std::remove_if(gaps.begin(), gaps.end(),
                              [](const GapEntry &g) {
                                  return !(g.rel_pct > 0.0);
                              }),
               gaps.end());
    std::stable_sort(gaps.begin(), gaps.end(),
                     [](const GapEntry &a, const GapEntry &b) {
                         return a.rel_pct < b.rel_pct;
                     });
    if (static_cast<int>(gaps.size()) > top_k)
        gaps.resize(top_k);
    return gaps;
}

std::vector<HistBin> histogram(const std::vector<GapEntry> &gaps,
                               double bin_width_pct) {
    if (!(bin_width_pct > 0.0))
        throw ConfigError("bin width must be positive");
    std::vector<HistBin> bins;
    if (gaps.empty())
        return bins;
    double max_pct = 0.0;
    for (const auto &g : gaps)
        max_pct = std::max(max_pct, g.rel_pct);
    const long last = static_cast<long>(std::floor(max_pct / bin_width_pct));
    for (long k = 0; k <= last; ++k)
        bins.push_back({k * bin_width_pct, (k + 1) * bin_width_pct,
                        k == last, 0});
    for (const auto &g : gaps) {
        long k = static_cast<long>(std::floor(g.rel_pct / bin_width_pct));
        if (k > last)
            k = last;
        ++bins[k].count;
    }
    return bins;
}

static double pop_std(const std::vector<double> &xs, double mean) {
    if (xs.empty())
        return 0.0;
    double acc = 0.0;
    for (double x : xs)
        acc += (x - mean) * (x - mean);
    return std::sqrt(acc / xs.size());
}

static double mean_of(const std::vector<double> &xs) {
    double acc = 0.0;
    for (double x : xs)
        acc += x;
    return xs.empty() ? 0.0 : acc / xs.size();
}

SensReport sensitivity(const CellConfig &cfg0, double delta,
                       SensSampling sampling, int samples, uint64_t seed) {
    if (!(delta >= 0.0) || !(delta < 1.0))
        throw ConfigError("delta must be in [0, 1)");
    if (sampling == SensSampling::MonteCarlo && samples < 1)
        throw ConfigError("monte-carlo sampling needs at least one sample");
    const CellConfig cfg = resolve(cfg0);
    validate(cfg);

    SensReport rep;
    std::mt19937_64 rng(seed);
    auto uni = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

    for (const std::string &ps : all_patterns(cfg)) {
        const WritePattern pat = WritePattern::parse(ps, cfg);
        const double nominal = run_cycle(cfg, pat).v_out;

        std::vector<int> nz;
        for (int i = 0; i < cfg.n; ++i)
            if (pat.digits[i] != 0)
                nz.push_back(i);

        SensRow row;
        row.pattern = ps;
        std::vector<double> errs;

        if (nominal == 0.0 && !nz.empty()) {
            row.flagged = true;
            // burn the draws this pattern would have used so the stream
            // stays aligned for the remaining patterns
            if (sampling == SensSampling::MonteCarlo)
                for (long j = 0; j < static_cast<long>(samples) * cfg.n; ++j)
                    uni();
        } else if (sampling == SensSampling::Corners) {
            if (nz.size() > 20)
                throw ConfigError("corner enumeration too large; use "
                                  "monte-carlo sampling");
            const long corners = 1L << nz.size();
            for (long mask = 0; mask < corners; ++mask) {
                std::vector<double> scale(cfg.n, 1.0);
                for (size_t j = 0; j < nz.size(); ++j)
                    scale[nz[j]] =
                        (mask >> j & 1) ? 1.0 + delta : 1.0 - delta;
                const double v = run_cycle(cfg, pat, scale).v_out;
                errs.push_back(nominal == 0.0
                                   ? 0.0
                                   : 100.0 * std::fabs(v - nominal) /
                                         nominal);
            }
        } else {
            for (int s = 0; s < samples; ++s) {
                std::vector<double> scale(cfg.n);
                for (int i = 0; i < cfg.n; ++i)
                    scale[i] = 1.0 - delta + 2.0 * delta * uni();
                const double v = run_cycle(cfg, pat, scale).v_out;
                errs.push_back(nominal == 0.0
                                   ? 0.0
                                   : 100.0 * std::fabs(v - nominal) /
                                         nominal);
            }
        }

        if (!row.flagged) {
            row.samples = static_cast<long>(errs.size());
            row.mean_pct = mean_of(errs);
            row.std_pct = pop_std(errs, row.mean_pct);
        }
        rep.rows.push_back(std::move(row));
    }

    std::vector<double> means;
    for (const auto &r : rep.rows) {
        if (r.flagged) {
            ++rep.flagged_count;
            continue;
        }
        means.push_back(r.mean_pct);
        rep.total_samples += r.samples;
    }
    rep.average_mean = mean_of(means);
    rep.average_std = pop_std(means, rep.average_mean);
    return rep;
}

namespace {

constexpr int kTopoNodes = 6;
const char *const kTopoNames[kTopoNodes] = {"gnd", "rail", "out",
                                            "a",   "b",    "c"};

struct TopoPerm {
    int map[kTopoNodes];
};

// Terminals stay fixed; only the internal labels a, b, c permute.
std::vector<TopoPerm> internal_perms() {
    std::vector<TopoPerm> out;
    int lab[3] = {3, 4, 5};
    std::sort(lab, lab + 3);
    do {
        TopoPerm p{{0, 1, 2, lab[0], lab[1], lab[2]}};
        out.push_back(p);
    } while (std::next_permutation(lab, lab + 3));
    return out;
}

std::vector<int> encode_under(const std::pair<int, int> &m_pair,
                              const std::vector<std::pair<int, int>> &r_pairs,
                              const TopoPerm &perm) {
    auto norm = [&perm](std::pair<int, int> e) {
        int x = perm.map[e.first], y = perm.map[e.second];
        return x < y ? std::make_pair(x, y) : std::make_pair(y, x);
    };
    std::vector<std::pair<int, int>> rr;
    for (const auto &e : r_pairs)
        rr.push_back(norm(e));
    std::sort(rr.begin(), rr.end());
    const auto me = norm(m_pair);
    std::vector<int> enc{me.first, me.second};
    for (const auto &e : rr) {
        enc.push_back(e.first);
        enc.push_back(e.second);
    }
    return enc;
}

struct UnionFind {
    int root[kTopoNodes];
    UnionFind() {
        for (int i = 0; i < kTopoNodes; ++i)
            root[i] = i;
    }
    int find(int x) {
        while (root[x] != x)
            x = root[x] = root[root[x]];
        return x;
    }
    void join(int x, int y) { root[find(x)] = find(y); }
};

std::string edges_label(const std::pair<int, int> &m_pair,
                        const std::vector<std::pair<int, int>> &r_pairs) {
    std::vector<std::pair<int, int>> rr = r_pairs;
    std::sort(rr.begin(), rr.end());
    std::string s = std::string("M:") + kTopoNames[m_pair.first] + "-" +
                    kTopoNames[m_pair.second];
    for (const auto &e : rr)
        s += std::string(";R:") + kTopoNames[e.first] + "-" +
             kTopoNames[e.second];
    return s;
}

} // namespace

TopoReport topology_search(int resistor_count, int samples, uint64_t seed,
                           double v_read, double r_load) {
    if (resistor_count < 1 || resistor_count > 8)
        throw ConfigError("resistor_count must be in [1, 8]");
    if (samples < 1)
        throw ConfigError("samples must be at least 1");
    if (!(v_read > 0.0) || !(r_load > 0.0))
        throw ConfigError("v_read and r_load must be positive");

    const double m_lo = 100.0, m_hi = 2e6, r_lo = 5.0, r_hi = 500.0;

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < kTopoNodes; ++i)
        for (int j = i + 1; j < kTopoNodes; ++j)
            pairs.emplace_back(i, j);
    const std::vector<TopoPerm> perms = internal_perms();

    TopoReport rep;

    std::vector<int> pick(resistor_count, 0);
    for (const auto &m_pair : pairs) {
        // combinations with replacement over the 15 node pairs
        std::fill(pick.begin(), pick.end(), 0);
        for (;;) {
            std::vector<std::pair<int, int>> r_pairs;
            for (int idx : pick)
                r_pairs.push_back(pairs[idx]);

            const std::vector<int> ident =
                encode_under(m_pair, r_pairs, perms[0]);
            bool canonical = true;
            for (size_t pi = 1; pi < perms.size() && canonical; ++pi)
                if (encode_under(m_pair, r_pairs, perms[pi]) < ident)
                    canonical = false;

            if (canonical) {
                UnionFind uf;
                uf.join(0, 1); // read source
                uf.join(0, 2); // load
                uf.join(m_pair.first, m_pair.second);
                for (const auto &e : r_pairs)
                    uf.join(e.first, e.second);
                bool used[kTopoNodes] = {true, true, true, false, false,
                                         false};
                used[m_pair.first] = used[m_pair.second] = true;
                for (const auto &e : r_pairs)
                    used[e.first] = used[e.second] = true;
                bool connected = true;
                for (int v = 0; v < kTopoNodes; ++v)
                    if (used[v] && uf.find(v) != uf.find(0))
                        connected = false;

                if (connected) {
                    Netlist nl;
                    int idx[kTopoNodes];
                    idx[0] = 0;
                    for (int v = 1; v < kTopoNodes; ++v)
                        idx[v] = used[v] ? nl.add_node(kTopoNames[v]) : -1;
                    nl.resistors.push_back(
                        {"Rm", idx[m_pair.first], idx[m_pair.second], 1.0});
                    for (size_t j = 0; j < r_pairs.size(); ++j)
                        nl.resistors.push_back(
                            {"R" + std::to_string(j + 1),
                             idx[r_pairs[j].first], idx[r_pairs[j].second],
                             1.0});
                    nl.resistors.push_back({"R_load", idx[2], 0, r_load});
                    nl.sources.push_back(
                        {"Vr", idx[1], 0, {{{0.0, 1.0, v_read}}}});
                    const int out_node = idx[2];

                    std::mt19937_64 rng(seed);
                    auto uni = [&rng]() {
                        return (rng() >> 11) * 0x1.0p-53;
                    };
                    double dev = 0.0;
                    for (int s = 0; s < samples; ++s) {
                        const double m_val = std::exp(
                            std::log(m_lo) +
                            uni() * (std::log(m_hi) - std::log(m_lo)));
                        const double r_val = std::exp(
                            std::log(r_lo) +
                            uni() * (std::log(r_hi) - std::log(r_lo)));
                        nl.resistors[0].ohms = m_val;
                        for (size_t j = 0; j < r_pairs.size(); ++j)
                            nl.resistors[1 + j].ohms = r_val;
                        const double want = generalized_vout(
                            {m_val}, {r_val}, r_load, v_read);
                        try {
                            const Solution sol = solve_dc(nl, {}, 0.0);
                            dev = std::max(
                                dev, std::fabs(sol.node_v[out_node] - want) /
                                         want);
                        } catch (const SimulationError &) {
                            dev = INFINITY;
                            break;
                        }
                    }
                    rep.candidates.push_back(
                        {edges_label(m_pair, r_pairs), dev});
                    ++rep.enumerated;
                }
            }

            // next multiset index vector (non-decreasing)
            int i = resistor_count - 1;
            while (i >= 0 && pick[i] == static_cast<int>(pairs.size()) - 1)
                --i;
            if (i < 0)
                break;
            const int v = pick[i] + 1;
            for (int j = i; j < resistor_count; ++j)
                pick[j] = v;
        }
    }

    std::sort(rep.candidates.begin(), rep.candidates.end(),
              [](const TopoCandidate &a, const TopoCandidate &b) {
                  if (a.max_rel_dev != b.max_rel_dev)
                      return a.max_rel_dev < b.max_rel_dev;
                  return a.edges < b.edges;
              });
    for (const auto &c : rep.candidates)
        if (c.max_rel_dev <= 1e-9)
            ++rep.exact_count;
    return rep;
}

void write_level_csv(const LevelTable &t, const std::string &path) {
    std::string s = "pattern,v_out_V,source\n";
    for (const auto &r : t.rows)
        s += r.pattern + "," + fmt_g(r.v_out) + "," + t.source + "\n";
    write_file(path, s);
}

void write_gap_csv(const std::vector<GapEntry> &gaps,
                   const std::string &path) {
    std::string s = "pattern_hi,pattern_lo,rel_diff_percent\n";
    for (const auto &g : gaps)
        s += g.pattern_hi + "," + g.pattern_lo + "," + fmt_g(g.rel_pct) +
             "\n";
    write_file(path, s);
}

void write_histogram_csv(const std::vector<HistBin> &bins,
                         const std::string &path) {
    std::string s = "bin_lo_pct,bin_hi_pct,count\n";
    for (const auto &b : bins)
        s += fmt_g(b.lo_pct) + "," + (b.open ? "" : fmt_g(b.hi_pct)) + "," +
             std::to_string(b.count) + "\n";
    write_file(path, s);
}

void write_sensitivity_csv(const SensReport &r, const std::string &path) {
    std::string s = "pattern,mean_rel_err_pct,std_rel_err_pct,samples\n";
    for (const auto &row : r.rows) {
        if (row.flagged)
            s += row.pattern + ",,,0\n";
        else
            s += row.pattern + "," + fmt_g(row.mean_pct) + "," +
                 fmt_g(row.std_pct) + "," + std::to_string(row.samples) +
                 "\n";
    }
    s += "AVERAGE," + fmt_g(r.average_mean) + "," + fmt_g(r.average_std) +
         "," + std::to_string(r.total_samples) + "\n";
    write_file(path, s);
}

void write_topology_csv(const TopoReport &r, const std::string &path) {
    std::string s = "edges,max_rel_dev\n";
    for (const auto &c : r.candidates)
        s += c.edges + "," + fmt_g(c.max_rel_dev) + "\n";
    write_file(path, s);
}

} // namespace memcell
