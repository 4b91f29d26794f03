// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "irsim/config.hpp"
#include "irsim/schemes.hpp"

namespace irsim {

// One aggregated (scheme, point) cell. A point is a UE distance for distance sweeps and
// an IRS size for N-scaling runs.
struct SweepRow {
    Scheme scheme = Scheme::ao;
    double d_m = 0.0;
    int n_irs = 0;
    double mean_snr_db = 0.0;
    double stderr_db = 0.0;
    int trials = 0;       // trials that produced a value
    int degenerate = 0;   // trials rejected by the scheme; not written to CSV
    std::uint64_t seed = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by scheme name, then d_m, then n_irs
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    long long evaluations = 0;
    long long degenerate = 0;

    // Throws std::out_of_range when the cell is missing.
    const SweepRow& at(Scheme scheme, double d_m) const;
    const SweepRow& at_n(Scheme scheme, int n_irs) const;

    // False when some cell has no successful trial.
    bool complete() const;
};

// Evaluates one scheme on one channel draw. `trial_seed` feeds the scheme's own random
// needs (random phases, AO restarts, DOA snapshots) so every scheme sees the same
// channel no matter which others run. Throws DegenerateError, StructuralError or
// EstimationError when the draw cannot be handled.
SchemeResult evaluate_scheme(Scheme scheme, const ChannelSet& ch, const SimConfig& cfg,
                             std::uint64_t trial_seed);

// Monte-Carlo SNR versus UE distance. Every scheme at a given (point, trial) consumes
// the identical ChannelSet; output bytes are independent of the thread count.
SweepResult run_sweep(const SimConfig& cfg);

// UE at the IRS end of the line (d = d_bi), direct link suppressed, SNR versus N.
SweepResult run_n_scaling(const SimConfig& cfg, const std::vector<int>& n_values);

// Header `scheme,d_m,n_irs,mean_snr_db,stderr_db,trials,seed`, LF line endings,
// shortest round-trip decimal formatting.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::filesystem::path& path);

SweepResult parse_csv(std::istream& in);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace irsim
