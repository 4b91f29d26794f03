// SPDX-License-Identifier: Apache-2.0

#include "irsim/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "irsim/doa.hpp"
#include "irsim/errors.hpp"
#include "irsim/random.hpp"

namespace irsim {

namespace {

constexpr std::uint64_t kRandomPhaseSalt = 0x52414E44ULL;
constexpr std::uint64_t kAoRestartSalt = 0x414F5253ULL;
constexpr std::uint64_t kDoaSalt = 0x444F4121ULL;

constexpr const char* kCsvHeader = "scheme,d_m,n_irs,mean_snr_db,stderr_db,trials,seed";

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct PointSpec {
    double d_m;
    int n_irs;
    SimConfig cfg;
    bool suppress_direct;
};

// Running sums in trial order; the reduction order is fixed so results do not depend
// on how work was split across threads.
struct Accumulator {
    int count = 0;
    int degenerate = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    double stderr_of_mean() const {
        if (count < 2) {
            return 0.0;
        }
        return std::sqrt(m2 / (count - 1) / count);
    }
};

unsigned worker_count(const SimConfig& cfg, int trials) {
    unsigned n = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
    return std::min<unsigned>(n, static_cast<unsigned>(trials));
}

// Returns per-trial, per-scheme linear SNR (nullopt for a degenerate draw).
std::vector<std::vector<std::optional<double>>> run_point(const PointSpec& point,
                                                          std::size_t point_index,
                                                          const CVector& irs_side) {
    const SimConfig& cfg = point.cfg;
    const Geometry geo = cfg.geometry_at(point.d_m);
    const auto trials = static_cast<std::size_t>(cfg.trials);
    std::vector<std::vector<std::optional<double>>> out(
        trials, std::vector<std::optional<double>>(cfg.schemes.size()));

    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&](std::size_t first, std::size_t last) {
        try {
            for (std::size_t t = first; t < last; ++t) {
                const std::uint64_t trial_seed = derive_seed(cfg.master_seed, {point_index, t});
                Rng rng{trial_seed};
                ChannelSet ch = generate_channels(cfg, geo, rng, irs_side);
                if (point.suppress_direct) {
                    ch.h_d.setZero();
                }
                for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
                    try {
                        out[t][s] = evaluate_scheme(cfg.schemes[s], ch, cfg, trial_seed).snr_linear;
                    } catch (const DegenerateError&) {
                    } catch (const StructuralError&) {
                    } catch (const EstimationError&) {
                    }
                }
            }
        } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };

    const unsigned workers = worker_count(cfg, cfg.trials);
    if (workers <= 1) {
        work(0, trials);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (trials + workers - 1) / workers;
        for (std::size_t first = 0; first < trials; first += chunk) {
            pool.emplace_back(work, first, std::min(trials, first + chunk));
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

void sort_rows(std::vector<SweepRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        const auto na = scheme_name(a.scheme);
        const auto nb = scheme_name(b.scheme);
        if (na != nb) {
            return na < nb;
        }
        if (a.d_m != b.d_m) {
            return a.d_m < b.d_m;
        }
        return a.n_irs < b.n_irs;
    });
}

SweepResult run_points(const SimConfig& base, const std::vector<PointSpec>& points) {
    SweepResult result;
    result.config_hash = config_hash(base);
    result.seed = base.master_seed;

    for (std::size_t p = 0; p < points.size(); ++p) {
        const PointSpec& point = points[p];
        const CVector irs_side = irs_response(point.cfg);
        const auto samples = run_point(point, p, irs_side);

        for (std::size_t s = 0; s < point.cfg.schemes.size(); ++s) {
            Accumulator acc;
            for (const auto& trial : samples) {
                if (!trial[s]) {
                    ++acc.degenerate;
                    continue;
                }
                const double gamma = *trial[s];
                acc.add(base.aggregation == Aggregation::db_mean ? 10.0 * std::log10(gamma)
                                                                 : gamma);
            }
            SweepRow row;
            row.scheme = point.cfg.schemes[s];
            row.d_m = point.d_m;
            row.n_irs = point.n_irs;
            row.trials = acc.count;
            row.degenerate = acc.degenerate;
            row.seed = base.master_seed;
            if (acc.count == 0) {
                row.mean_snr_db = std::numeric_limits<double>::quiet_NaN();
                row.stderr_db = std::numeric_limits<double>::quiet_NaN();
            } else if (base.aggregation == Aggregation::db_mean) {
                row.mean_snr_db = acc.mean;
                row.stderr_db = acc.stderr_of_mean();
            } else {
                row.mean_snr_db = 10.0 * std::log10(acc.mean);
                row.stderr_db = 10.0 / std::log(10.0) * acc.stderr_of_mean() / acc.mean;
            }
            result.evaluations += static_cast<long long>(samples.size());
            result.degenerate += acc.degenerate;
            result.rows.push_back(row);
        }
    }
    sort_rows(result.rows);
    return result;
}

SweepRow parse_row(std::string_view line, int line_no) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (fields.size() != 7) {
        throw IoError("csv line " + std::to_string(line_no) + ": expected 7 fields");
    }
    auto number = [line_no](std::string_view f, auto& value) {
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
        if (ec != std::errc{} || ptr != f.data() + f.size()) {
            throw IoError("csv line " + std::to_string(line_no) + ": bad number '" +
                          std::string(f) + "'");
        }
    };
    SweepRow row;
    row.scheme = parse_scheme(fields[0]);
    number(fields[1], row.d_m);
    number(fields[2], row.n_irs);
    number(fields[3], row.mean_snr_db);
    number(fields[4], row.stderr_db);
    number(fields[5], row.trials);
    number(fields[6], row.seed);
    return row;
}

}  // namespace

const SweepRow& SweepResult::at(Scheme scheme, double d_m) const {
    for (const auto& row : rows) {
        if (row.scheme == scheme && row.d_m == d_m) {
            return row;
        }
    }
    throw std::out_of_range("SweepResult: no row for " + std::string(scheme_name(scheme)) +
                            " at d = " + format_double(d_m));
}

const SweepRow& SweepResult::at_n(Scheme scheme, int n_irs) const {
    for (const auto& row : rows) {
        if (row.scheme == scheme && row.n_irs == n_irs) {
            return row;
        }
    }
    throw std::out_of_range("SweepResult: no row for " + std::string(scheme_name(scheme)) +
                            " at N = " + std::to_string(n_irs));
}

bool SweepResult::complete() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) {
        return r.trials > 0 && std::isfinite(r.mean_snr_db) && std::isfinite(r.stderr_db);
    });
}

SchemeResult evaluate_scheme(Scheme scheme, const ChannelSet& ch, const SimConfig& cfg,
                             std::uint64_t trial_seed) {
    switch (scheme) {
    case Scheme::ao: {
        const ReflectionState init = cfg.ao_init == AoInit::reference
                                         ? ao_reference_init(ch)
                                         : ReflectionState::zeros(ch.n_irs());
        SchemeResult best = ao_optimize(ch, cfg.budget, cfg.ao_iters, init);
        if (cfg.ao_restarts > 0) {
            Rng rng{derive_seed(trial_seed, {kAoRestartSalt})};
            for (int r = 0; r < cfg.ao_restarts; ++r) {
                RVector phases(ch.n_irs());
                for (Eigen::Index n = 0; n < phases.size(); ++n) {
                    phases[n] = uniform_phase(rng);
                }
                SchemeResult candidate =
                    ao_optimize(ch, cfg.budget, cfg.ao_iters, ReflectionState(phases));
                if (candidate.snr_linear > best.snr_linear) {
                    best = std::move(candidate);
                }
            }
        }
        return best;
    }
    case Scheme::dbirs: {
        const UniformLinearArray bs_array(static_cast<int>(ch.n_bs()), cfg.spacing_wavelengths);
        const auto [sub1, sub2] = split_subarrays(bs_array);
        const GeometryAngles truth = geometry_angles(ch.geometry);
        double theta_ue = truth.theta_ue;
        if (cfg.dbirs_doa == DoaSource::music) {
            Rng rng{derive_seed(trial_seed, {kDoaSalt})};
            const SnapshotBlock block =
                synthesize_snapshots(sub2, truth.theta_ue, cfg.doa_snr_db, cfg.doa_snapshots, rng);
            theta_ue = music_estimate(block, 1, cfg.doa_grid_points).theta_hat;
        }
        const DbirsConfiguration conf = dbirs_configure(ch, truth.theta_irs, theta_ue, sub1, sub2);
        return dbirs_snr(ch, conf, cfg.budget, cfg.dbirs_mode, cfg.power_mode, &truth);
    }
    case Scheme::mrt_bs_irs:
        return mrt_bs_irs(ch, cfg.budget, std::min<Eigen::Index>(cfg.bs_irs_row, ch.n_irs() - 1));
    case Scheme::mrt_direct:
        return mrt_direct(ch, cfg.budget);
    case Scheme::no_irs:
        return no_irs_baseline(ch, cfg.budget);
    case Scheme::random_phase: {
        Rng rng{derive_seed(trial_seed, {kRandomPhaseSalt})};
        return random_phase_scheme(ch, cfg.budget, rng);
    }
    }
    throw ConfigError("evaluate_scheme: unknown scheme");
}

SweepResult run_sweep(const SimConfig& cfg) {
    cfg.validate();
    std::vector<PointSpec> points;
    for (double d : cfg.sweep_d_m) {
        points.push_back(PointSpec{d, cfg.n_irs, cfg, false});
    }
    return run_points(cfg, points);
}

SweepResult run_n_scaling(const SimConfig& cfg, const std::vector<int>& n_values) {
    if (n_values.empty()) {
        throw ConfigError("run_n_scaling: the list of IRS sizes is empty");
    }
    for (Scheme s : cfg.schemes) {
        if (s == Scheme::mrt_direct || s == Scheme::no_irs) {
            throw ConfigError("run_n_scaling: scheme '" + std::string(scheme_name(s)) +
                              "' needs the direct link, which N-scaling suppresses");
        }
    }
    std::vector<PointSpec> points;
    for (int n : n_values) {
        SimConfig point_cfg = cfg;
        point_cfg.n_irs = n;
        point_cfg.bs_irs_row = std::min(cfg.bs_irs_row, std::max(n - 1, 0));
        point_cfg.sweep_d_m = {cfg.d_bi_m};
        point_cfg.validate();
        points.push_back(PointSpec{cfg.d_bi_m, n, point_cfg, true});
    }
    return run_points(cfg, points);
}

void emit_csv(const SweepResult& result, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& row : result.rows) {
        out << scheme_name(row.scheme) << ',' << format_double(row.d_m) << ',' << row.n_irs << ','
            << format_double(row.mean_snr_db) << ',' << format_double(row.stderr_db) << ','
            << row.trials << ',' << row.seed << '\n';
    }
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    emit_csv(result, out);
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

SweepResult parse_csv(std::istream& in) {
    SweepResult result;
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw IoError("csv: missing or unexpected header");
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        result.rows.push_back(parse_row(line, line_no));
    }
    if (!result.rows.empty()) {
        result.seed = result.rows.front().seed;
    }
    return result;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DimensionError("fit_slope: need at least two (x, y) pairs of equal length");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) {
        throw DomainError("fit_slope: x values are all equal");
    }
    return sxy / sxx;
}

}  // namespace irsim
