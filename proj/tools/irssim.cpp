// SPDX-License-Identifier: Apache-2.0
//
// irssim: command-line front end for the IRS link simulator.
//
//   irssim sweep    --config default.cfg [--schemes ao,dbirs] [--trials T] [--seed S] [--out results.csv]
//   irssim nscale   --config default.cfg --n 25,50,100,200,400 --out scaling.csv
//   irssim doa-demo --theta 0.35 --snr-db 20
//
// Exit status: 0 success, 1 configuration error, 2 runtime or statistical failure.

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "irsim/config.hpp"
#include "irsim/doa.hpp"
#include "irsim/errors.hpp"
#include "irsim/harness.hpp"
#include "irsim/random.hpp"

namespace {

using namespace irsim;

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonOptions {
    std::string config;
    std::string schemes;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::vector<std::string> overrides;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "Key-value configuration file")->required();
    cmd->add_option("--schemes", o.schemes, "Comma-separated scheme subset");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials per point");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--set", o.overrides, "Override a config key, e.g. --set power_mode=matched");
    cmd->add_option("--out", o.out, "CSV output path (default: stdout)");
}

SimConfig build_config(const CommonOptions& o) {
    SimConfig cfg = load_config(o.config);
    for (const std::string& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        }
        apply_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.schemes.empty()) {
        cfg.schemes = parse_scheme_list(o.schemes);
    }
    if (o.trials) {
        cfg.trials = *o.trials;
    }
    if (o.seed) {
        cfg.master_seed = *o.seed;
    }
    if (o.threads) {
        cfg.threads = *o.threads;
    }
    cfg.validate();
    return cfg;
}

void write_result(const SweepResult& r, const std::string& out) {
    if (out.empty()) {
        emit_csv(r, std::cout);
    } else {
        emit_csv(r, std::filesystem::path(out));
    }
}

int finish(const SweepResult& r) {
    std::fprintf(stderr, "config_hash=%016" PRIx64 " seed=%" PRIu64 " evaluations=%lld degenerate=%lld\n",
                 r.config_hash, r.seed, r.evaluations, r.degenerate);
    if (!r.complete()) {
        std::fprintf(stderr, "error: some (scheme, point) cells have no successful trial\n");
        return kExitRuntime;
    }
    return 0;
}

int run_sweep_cmd(const CommonOptions& o) {
    const SimConfig cfg = build_config(o);
    const SweepResult r = run_sweep(cfg);
    write_result(r, o.out);
    return finish(r);
}

int run_nscale_cmd(const CommonOptions& o, const std::string& n_list) {
    SimConfig cfg = build_config(o);
    if (o.schemes.empty()) {
        // Schemes that only see the direct link are meaningless once it is suppressed.
        std::erase_if(cfg.schemes, [](Scheme s) { return s == Scheme::mrt_direct || s == Scheme::no_irs; });
    }
    const std::vector<int> ns = parse_int_list(n_list, "--n");
    const SweepResult r = run_n_scaling(cfg, ns);
    write_result(r, o.out);
    if (ns.size() >= 2 && r.complete()) {
        std::vector<double> x;
        for (int n : ns) {
            x.push_back(std::log10(static_cast<double>(n)));
        }
        for (Scheme s : cfg.schemes) {
            std::vector<double> y;
            for (int n : ns) {
                y.push_back(r.at_n(s, n).mean_snr_db);
            }
            std::fprintf(stderr, "%s: %.3f dB/decade\n", std::string(scheme_name(s)).c_str(),
                         fit_slope(x, y));
        }
    }
    return finish(r);
}

struct DoaOptions {
    double theta = 0.0;
    double snr_db = 20.0;
    int elements = 8;
    int snapshots = 100;
    int grid = 1801;
    std::uint64_t seed = 1;
};

int run_doa_cmd(const DoaOptions& o) {
    if (o.elements < 2) {
        throw ConfigError("--elements must be >= 2");
    }
    if (!(std::abs(o.theta) < kPi / 2.0)) {
        throw ConfigError("--theta must lie in (-pi/2, pi/2)");
    }
    const UniformLinearArray array(o.elements);
    Rng rng{derive_seed(o.seed, {})};
    const SnapshotBlock block = synthesize_snapshots(array, o.theta, o.snr_db, o.snapshots, rng);
    const MusicEstimate est = music_estimate(block, 1, o.grid);
    std::printf("theta_hat=%.10g rad (%.6g deg)\n", est.theta_hat, est.theta_hat * 180.0 / kPi);
    std::printf("error=%.6g deg\n", (est.theta_hat - o.theta) * 180.0 / kPi);
    std::printf("peak_to_median=%.6g\n", est.peak_to_median());
    if (est.undersampled) {
        std::fprintf(stderr, "warning: fewer snapshots than elements\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IRS-assisted link simulator"};
    app.require_subcommand(1);

    CommonOptions sweep_opts;
    CLI::App* sweep = app.add_subcommand("sweep", "SNR versus UE distance for each scheme");
    add_common(sweep, sweep_opts);

    CommonOptions nscale_opts;
    std::string n_list = "25,50,100,200,400";
    CLI::App* nscale = app.add_subcommand("nscale", "SNR versus IRS size with the direct link suppressed");
    add_common(nscale, nscale_opts);
    nscale->add_option("--n", n_list, "Comma-separated IRS sizes")->capture_default_str();

    DoaOptions doa_opts;
    CLI::App* doa = app.add_subcommand("doa-demo", "Single-source MUSIC estimate on synthetic snapshots");
    doa->add_option("--theta", doa_opts.theta, "True angle in radians")->required();
    doa->add_option("--snr-db", doa_opts.snr_db, "Per-element SNR in dB")->required();
    doa->add_option("--elements", doa_opts.elements, "Array size")->capture_default_str();
    doa->add_option("--snapshots", doa_opts.snapshots, "Number of snapshots")->capture_default_str();
    doa->add_option("--grid", doa_opts.grid, "Spectrum grid points")->capture_default_str();
    doa->add_option("--seed", doa_opts.seed, "Random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*sweep) {
            return run_sweep_cmd(sweep_opts);
        }
        if (*nscale) {
            return run_nscale_cmd(nscale_opts, n_list);
        }
        return run_doa_cmd(doa_opts);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
