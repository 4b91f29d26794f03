// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "irsim/array.hpp"
#include "irsim/channel.hpp"
#include "irsim/config.hpp"
#include "irsim/doa.hpp"
#include "irsim/harness.hpp"
#include "irsim/random.hpp"
#include "irsim/schemes.hpp"

namespace {

using namespace irsim;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, a, b, c, d);
    return buf;
}

CVector random_cvector(Rng& rng, Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = complex_normal(rng);
    }
    return v;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// The default sweep is shared by the shape and reproducibility criteria.
const SweepResult& default_sweep() {
    static const SweepResult result = run_sweep(SimConfig{});
    return result;
}

std::string csv_of(const SweepResult& r) {
    std::ostringstream out;
    emit_csv(r, out);
    return out.str();
}

Outcome beam_gain_identity() {
    double worst = 0.0;
    for (int n : {2, 8, 32}) {
        const UniformLinearArray array(n);
        for (int k = 0; k < 181; ++k) {
            const double theta = -kPi / 2.0 + kPi * k / 180.0;
            const double gain = std::abs(beam_pattern(array, conjugate_beamformer(array, theta), theta));
            worst = std::max(worst, std::abs(gain - std::sqrt(static_cast<double>(n))));
        }
    }
    return {worst < 1e-9, fmt("max | |B| - sqrt(Ns) | = %.3g", worst)};
}

Outcome phase_alignment_optimality() {
    constexpr int levels = 64;
    Rng rng(derive_seed(2, {}));
    CVector rotor(levels);
    for (int k = 0; k < levels; ++k) {
        rotor[k] = std::polar(1.0, kTwoPi * k / levels);
    }
    int violations = 0;
    double worst_excess = -1e300;
    double worst_gap_ratio = 0.0;
    for (int inst = 0; inst < 50; ++inst) {
        const DbirsScalars s{random_cvector(rng, 3), random_cvector(rng, 3), complex_normal(rng)};
        const CVector t = s.g.cwiseProduct(s.h);
        const CVector c = dbirs_optimal_phases(s).coefficients();
        const double closed = std::abs(t.cwiseProduct(c).sum() + s.h_d);
        double grid = 0.0;
        for (int a = 0; a < levels; ++a) {
            for (int b = 0; b < levels; ++b) {
                const cdouble partial = s.h_d + t[0] * rotor[a] + t[1] * rotor[b];
                for (int e = 0; e < levels; ++e) {
                    grid = std::max(grid, std::abs(partial + t[2] * rotor[e]));
                }
            }
        }
        const double slack = (1.0 - std::cos(kPi / levels)) * t.cwiseAbs().sum();
        worst_excess = std::max(worst_excess, grid - closed);
        worst_gap_ratio = std::max(worst_gap_ratio, (closed - grid) / slack);
        if (grid > closed + 1e-12 || closed - grid > slack + 1e-12) {
            ++violations;
        }
    }
    return {violations == 0,
            fmt("50 instances, max(grid - closed) = %.3g, max gap/slack = %.3f", worst_excess,
                worst_gap_ratio)};
}

Outcome dbirs_closed_form() {
    const SimConfig cfg;
    const auto [sub1, sub2] = split_subarrays(UniformLinearArray(cfg.n_bs, cfg.spacing_wavelengths));
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const double d = cfg.sweep_d_m[seed % cfg.sweep_d_m.size()];
        const Geometry geo = cfg.geometry_at(d);
        Rng rng(derive_seed(3, {seed}));
        const ChannelSet ch = generate_channels(cfg, geo, rng);
        const GeometryAngles ang = geometry_angles(geo);
        const DbirsConfiguration conf = dbirs_configure(ch, ang.theta_irs, ang.theta_ue, sub1, sub2);
        const double pipeline = dbirs_snr(ch, conf, cfg.budget, DbirsMode::idealized).snr_linear;
        const double closed = dbirs_snr_max(dbirs_extract(ch, sub1.num_elements()), sub1.num_elements(),
                                            cfg.budget);
        worst = std::max(worst, rel_diff(pipeline, closed));
    }
    return {worst < 1e-9, fmt("100 instances, max relative error %.3g", worst)};
}

Outcome ao_sanity() {
    const SimConfig cfg;
    const LinkBudget unity{0.0, 0.0};
    int non_monotone = 0;
    double worst_drop = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(derive_seed(4, {seed}));
        const ChannelSet ch = generate_channels(cfg, cfg.geometry_at(cfg.sweep_d_m[seed % 26]), rng);
        for (const ReflectionState& init : {ao_reference_init(ch), ReflectionState::zeros(ch.n_irs())}) {
            AoTrace trace;
            ao_optimize(ch, cfg.budget, cfg.ao_iters, init, &trace);
            for (std::size_t i = 1; i < trace.objective.size(); ++i) {
                const double drop = (trace.objective[i - 1] - trace.objective[i]) / trace.objective[i - 1];
                worst_drop = std::max(worst_drop, drop);
                if (drop > 1e-12) {
                    ++non_monotone;
                }
            }
        }
    }
    double worst_single = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(derive_seed(41, {seed}));
        ChannelSet ch;
        ch.h_d = random_cvector(rng, 1);
        ch.H = random_cvector(rng, 20);
        ch.g = random_cvector(rng, 20);
        const double ao = ao_optimize(ch, unity, 1, ReflectionState::zeros(20)).snr_linear;
        const double amp = ch.g.cwiseAbs().dot(ch.H.col(0).cwiseAbs()) + std::abs(ch.h_d[0]);
        worst_single = std::max(worst_single, rel_diff(ao, amp * amp));
    }
    return {non_monotone == 0 && worst_single < 1e-9,
            fmt("%g non-monotone half-steps (worst relative drop %.3g); N_b=1 max relative error %.3g",
                non_monotone, worst_drop, worst_single)};
}

Outcome passive_gain_scaling() {
    SimConfig cfg;
    cfg.trials = 500;
    cfg.schemes = {Scheme::ao, Scheme::dbirs};
    const std::vector<int> ns{25, 50, 100, 200, 400};
    const SweepResult r = run_n_scaling(cfg, ns);
    std::vector<double> x;
    for (int n : ns) {
        x.push_back(std::log10(static_cast<double>(n)));
    }
    bool pass = r.complete();
    std::string detail;
    for (Scheme s : cfg.schemes) {
        std::vector<double> y;
        for (int n : ns) {
            y.push_back(r.at_n(s, n).mean_snr_db);
        }
        const double slope = fit_slope(x, y);
        pass = pass && std::abs(slope - 20.0) <= 1.0;
        detail += std::string(detail.empty() ? "" : ", ") + std::string(scheme_name(s)) +
                  fmt(" slope %.3f dB/decade", slope);
    }
    return {pass, detail};
}

Outcome coverage_shape() {
    const SweepResult& r = default_sweep();
    double center_gap = 0.0;
    for (double d : SimConfig{}.sweep_d_m) {
        if (d <= 15.0) {
            center_gap = std::max(center_gap,
                                  r.at(Scheme::ao, d).mean_snr_db - r.at(Scheme::mrt_direct, d).mean_snr_db);
        }
    }
    const double bs_irs_edge = r.at(Scheme::mrt_bs_irs, 51.0).mean_snr_db;
    const double bs_irs_center = r.at(Scheme::mrt_bs_irs, 15.0).mean_snr_db;
    const double ao_edge = r.at(Scheme::ao, 51.0).mean_snr_db;
    const double random_gap = ao_edge - r.at(Scheme::random_phase, 51.0).mean_snr_db;
    const double dbirs_gap = ao_edge - r.at(Scheme::dbirs, 51.0).mean_snr_db;
    const double degenerate_fraction =
        static_cast<double>(r.degenerate) / static_cast<double>(std::max(1LL, r.evaluations));

    const bool a = center_gap <= 1.0;
    const bool b = bs_irs_edge > bs_irs_center;
    const bool c = random_gap >= 3.0;
    const bool d = dbirs_gap <= 5.0;
    const bool e = degenerate_fraction <= 1e-3;
    std::string detail = fmt("(a) center MRT gap %.3f dB; (b) BS-IRS MRT edge-center %.3f dB; ", center_gap,
                             bs_irs_edge - bs_irs_center);
    detail += fmt("(c) random-phase gap %.3f dB; (d) DB-IRS edge gap %.3f dB; degenerate %.2g", random_gap,
                  dbirs_gap, degenerate_fraction);
    return {r.complete() && a && b && c && d && e, detail};
}

Outcome music_accuracy() {
    const UniformLinearArray array(8);
    const double theta = 20.0 * kPi / 180.0;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(derive_seed(7, {seed}));
        const SnapshotBlock block = synthesize_snapshots(array, theta, 20.0, 100, rng);
        if (std::abs(music_estimate(block, 1, 1801).theta_hat - theta) < kPi / 180.0) {
            ++hits;
        }
    }
    return {hits >= 190, fmt("%g/200 runs within 1 degree", hits)};
}

Outcome reproducibility() {
    const SweepResult& first = default_sweep();
    const SweepResult again = run_sweep(SimConfig{});
    const bool identical = csv_of(first) == csv_of(again);

    SimConfig reseeded;
    reseeded.master_seed = 2;
    const SweepResult other = run_sweep(reseeded);
    double worst_z = 0.0;
    int over = 0;
    for (const SweepRow& row : first.rows) {
        const SweepRow& alt = other.at(row.scheme, row.d_m);
        const double se = std::hypot(row.stderr_db, alt.stderr_db);
        const double z = std::abs(row.mean_snr_db - alt.mean_snr_db) / se;
        worst_z = std::max(worst_z, z);
        if (!(z < 3.0)) {
            ++over;
        }
    }
    std::string detail = std::string("byte-identical rerun: ") + (identical ? "yes" : "no");
    detail += fmt("; seed 1 vs 2: %g of %g cells >= 3 SE, max %.2f SE", over,
                  static_cast<double>(first.rows.size()), worst_z);
    return {identical && over == 0, detail};
}

Outcome u_invariance() {
    const SimConfig cfg;
    const std::vector<Scheme> schemes{Scheme::ao, Scheme::dbirs, Scheme::mrt_bs_irs, Scheme::mrt_direct,
                                      Scheme::no_irs};
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Geometry geo = cfg.geometry_at(cfg.sweep_d_m[(seed * 7) % cfg.sweep_d_m.size()]);
        Rng rng_u(derive_seed(9, {seed}));
        CVector u(cfg.n_irs);
        for (Eigen::Index n = 0; n < u.size(); ++n) {
            u[n] = std::polar(1.0, uniform_phase(rng_u));
        }
        Rng rng_a(derive_seed(90, {seed}));
        Rng rng_b(derive_seed(90, {seed}));
        const ChannelSet a = generate_channels(cfg, geo, rng_a);
        const ChannelSet b = generate_channels(cfg, geo, rng_b, u);
        for (Scheme s : schemes) {
            const double ga = evaluate_scheme(s, a, cfg, seed).snr_linear;
            const double gb = evaluate_scheme(s, b, cfg, seed).snr_linear;
            worst = std::max(worst, rel_diff(ga, gb));
        }
    }
    return {worst < 1e-9, fmt("20 seeds x 5 schemes, max relative change %.3g", worst)};
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "beam-gain identity", 1.0, beam_gain_identity},
        {2, "phase-alignment optimality", 60.0, phase_alignment_optimality},
        {3, "DB-IRS closed form", 5.0, dbirs_closed_form},
        {4, "AO sanity", 0.0, ao_sanity},
        {5, "N^2 passive gain", 120.0, passive_gain_scaling},
        {6, "coverage-curve shape", 600.0, coverage_shape},
        {7, "MUSIC accuracy", 30.0, music_accuracy},
        {8, "reproducibility", 0.0, reproducibility},
        {9, "IRS-side response invariance", 0.0, u_invariance},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_s <= 0.0 || elapsed < c.limit_s;
        const bool pass = outcome.pass && in_time;
        failures += pass ? 0 : 1;
        const std::string limit = c.limit_s > 0.0 ? fmt(", limit %.0f s", c.limit_s) : std::string();
        std::printf("[%s] %d %s: %s (%.2f s%s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    outcome.detail.c_str(), elapsed, limit.c_str(), in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
