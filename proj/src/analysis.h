#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cell.h"

namespace memcell {

struct LevelRow {
    std::string pattern;
    double v_out;
};

// Rows in lexicographic pattern order, one per pattern (m^n total).
struct LevelTable {
    std::vector<LevelRow> rows;
    std::string source; // "closed-form" or "transient"
    double v_read = 0.0;
};

enum class LevelMode { ClosedForm, Transient };

// ClosedForm uses the bundled per-digit device states and the algebraic
// readout; Transient runs a full reset/write/read cycle per pattern.
LevelTable enumerate_levels(const CellConfig &cfg, LevelMode mode);

// Number of groups left after merging consecutive sorted values whose
// relative gap (v_hi - v_lo)/v_hi is within epsilon_rel. Values near zero
// merge on the absolute scale epsilon_rel * v_read instead, so the all-off
// level does not fragment. Monotone non-increasing in epsilon_rel.
int count_distinct(const LevelTable &t, double epsilon_rel);

struct GapEntry {
    std::string pattern_hi;
    std::string pattern_lo;
    double rel_pct; // 100 * (v_hi - v_lo) / v_hi, 0 when v_hi = 0
};

// Levels sorted descending (ties broken by pattern); one entry per adjacent
// pair, so m^n - 1 entries. Equal neighbours give 0%.
std::vector<GapEntry> adjacent_gaps(const LevelTable &t);

// The top_k smallest strictly positive adjacent gaps, ascending. Zero gaps
// separate identical levels and are skipped.
std::vector<GapEntry> closest_pairs(const LevelTable &t, int top_k);

struct HistBin {
    double lo_pct = 0.0;
    double hi_pct = 0.0; // meaningless when open
    bool open = false;   // rightmost bin absorbs everything above lo
    long count = 0;
};

// Fixed-width bins [k*w, (k+1)*w) covering every gap; the last bin is
// open-ended. Bin counts sum to the gap count. Empty input gives no bins.
std::vector<HistBin> histogram(const std::vector<GapEntry> &gaps,
                               double bin_width_pct = 20.0);

struct SensRow {
    std::string pattern;
    double mean_pct = 0.0;
    double std_pct = 0.0; // population standard deviation
    long samples = 0;
    bool flagged = false; // nominal output was zero; stats undefined
};

struct SensReport {
    std::vector<SensRow> rows; // lexicographic pattern order
    double average_mean = 0.0; // unweighted over non-flagged rows
    double average_std = 0.0;  // population std of the row means
    long total_samples = 0;    // samples behind the average
    int flagged_count = 0;
};

enum class SensSampling { Corners, MonteCarlo };

// Perturbs each nonzero write amplitude by (1 +/- delta) and measures the
// relative output error per pattern. Corners enumerates every sign choice;
// MonteCarlo draws `samples` factor tuples from [1-delta, 1+delta] with a
// deterministic seeded generator. Reset and read are never perturbed.
SensReport sensitivity(const CellConfig &cfg, double delta,
                       SensSampling sampling, int samples, uint64_t seed);

struct TopoCandidate {
    std::string edges; // "M:a-b;R:rail-a;..." canonical element list
    double max_rel_dev;
};

struct TopoReport {
    std::vector<TopoCandidate> candidates; // ascending by deviation
    long enumerated = 0;                   // connected canonical candidates
    int exact_count = 0;                   // deviation <= 1e-9
};

// Enumerates connected one-memristor arrangements of `resistor_count` equal
// resistors over nodes {gnd, rail, out, a, b, c} (internal labels deduped up
// to permutation), drives each with the read source into the standard load,
// and scores the worst relative deviation from the single-sub-cell algebraic
// readout over `samples` log-uniform (M, R) draws. Every candidate sees the
// same draws.
TopoReport topology_search(int resistor_count, int samples, uint64_t seed,
                           double v_read = 0.1, double r_load = 20.0);

void write_level_csv(const LevelTable &t, const std::string &path);
void write_gap_csv(const std::vector<GapEntry> &gaps, const std::string &path);
void write_histogram_csv(const std::vector<HistBin> &bins,
                         const std::string &path);
void write_sensitivity_csv(const SensReport &r, const std::string &path);
void write_topology_csv(const TopoReport &r, const std::string &path);

} // namespace memcell
