// SPDX-License-Identifier: Apache-2.0

#include "irsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "irsim/errors.hpp"

namespace irsim {

namespace {

constexpr std::string_view kSchemeNames[] = {"ao",         "dbirs",  "mrt_bs_irs",
                                             "mrt_direct", "no_irs", "random_phase"};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view field, std::string_view value, std::string_view want) {
    throw ConfigError("config field '" + std::string(field) + "': cannot parse '" +
                      std::string(value) + "' as " + std::string(want));
}

double to_double(std::string_view field, std::string_view text) {
    text = trim(text);
    std::string_view body = text;
    if (!body.empty() && body.front() == '+') {
        body.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc{} || ptr != body.data() + body.size() || body.empty()) {
        bad_value(field, text, "a real number");
    }
    return value;
}

long long to_integer(std::string_view field, std::string_view text) {
    text = trim(text);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        bad_value(field, text, "an integer");
    }
    return value;
}

int to_int(std::string_view field, std::string_view text) {
    const long long v = to_integer(field, text);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        bad_value(field, text, "a 32-bit integer");
    }
    return static_cast<int>(v);
}

std::uint64_t to_u64(std::string_view field, std::string_view text) {
    text = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        bad_value(field, text, "an unsigned 64-bit integer");
    }
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

template <typename Enum>
Enum to_enum(std::string_view field, std::string_view text,
             std::initializer_list<std::pair<std::string_view, Enum>> options) {
    text = trim(text);
    for (const auto& [name, value] : options) {
        if (text == name) {
            return value;
        }
    }
    std::string want = "one of";
    for (const auto& option : options) {
        want += " " + std::string(option.first);
    }
    bad_value(field, text, want);
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    text = trim(text);
    if (text.empty()) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(trim(text.substr(start, comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

using Setter = std::function<void(SimConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    auto dbl = [](double SimConfig::*member) {
        return Setter{[member](SimConfig& c, std::string_view k, std::string_view v) {
            c.*member = to_double(k, v);
        }};
    };
    auto integer = [](int SimConfig::*member) {
        return Setter{[member](SimConfig& c, std::string_view k, std::string_view v) {
            c.*member = to_int(k, v);
        }};
    };
    auto link = [](LinkParams SimConfig::*link_member, double LinkParams::*field) {
        return Setter{[link_member, field](SimConfig& c, std::string_view k, std::string_view v) {
            (c.*link_member).*field = to_double(k, v);
        }};
    };

    static const std::map<std::string, Setter, std::less<>> table = {
        {"n_irs", integer(&SimConfig::n_irs)},
        {"n_bs", integer(&SimConfig::n_bs)},
        {"spacing_wavelengths", dbl(&SimConfig::spacing_wavelengths)},
        {"d_bi_m", dbl(&SimConfig::d_bi_m)},
        {"d_v_m", dbl(&SimConfig::d_v_m)},
        {"sweep_d_m",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.sweep_d_m = parse_double_list(v, k);
         }},
        {"bu_rician_k", link(&SimConfig::bu, &LinkParams::rician_k)},
        {"bu_alpha", link(&SimConfig::bu, &LinkParams::alpha)},
        {"bu_extra_loss_db", link(&SimConfig::bu, &LinkParams::extra_loss_db)},
        {"bi_rician_k", link(&SimConfig::bi, &LinkParams::rician_k)},
        {"bi_alpha", link(&SimConfig::bi, &LinkParams::alpha)},
        {"bi_extra_loss_db", link(&SimConfig::bi, &LinkParams::extra_loss_db)},
        {"iu_rician_k", link(&SimConfig::iu, &LinkParams::rician_k)},
        {"iu_alpha", link(&SimConfig::iu, &LinkParams::alpha)},
        {"iu_extra_loss_db", link(&SimConfig::iu, &LinkParams::extra_loss_db)},
        {"l0_db", dbl(&SimConfig::l0_db)},
        {"pt_dbm",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.budget.pt_dbm = to_double(k, v);
         }},
        {"noise_dbm",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.budget.noise_dbm = to_double(k, v);
         }},
        {"trials", integer(&SimConfig::trials)},
        {"master_seed",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.master_seed = to_u64(k, v);
         }},
        {"threads", integer(&SimConfig::threads)},
        {"schemes",
         [](SimConfig& c, std::string_view, std::string_view v) {
             c.schemes = parse_scheme_list(v);
         }},
        {"ao_iters", integer(&SimConfig::ao_iters)},
        {"ao_restarts", integer(&SimConfig::ao_restarts)},
        {"ao_init",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.ao_init = to_enum<AoInit>(
                 k, v, {{"reference", AoInit::reference}, {"zeros", AoInit::zeros}});
         }},
        {"dbirs_mode",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.dbirs_mode = to_enum<DbirsMode>(k, v,
                                               {{"idealized", DbirsMode::idealized},
                                                {"full_leakage", DbirsMode::full_leakage},
                                                {"full-leakage", DbirsMode::full_leakage}});
         }},
        {"power_mode",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.power_mode =
                 to_enum<PowerMode>(k, v, {{"paper", PowerMode::paper}, {"matched", PowerMode::matched}});
         }},
        {"aggregation",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.aggregation = to_enum<Aggregation>(
                 k, v, {{"linear", Aggregation::linear_mean}, {"db", Aggregation::db_mean}});
         }},
        {"dbirs_doa",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.dbirs_doa = to_enum<DoaSource>(
                 k, v, {{"geometry", DoaSource::geometry}, {"music", DoaSource::music}});
         }},
        {"doa_snr_db", dbl(&SimConfig::doa_snr_db)},
        {"doa_snapshots", integer(&SimConfig::doa_snapshots)},
        {"doa_grid_points", integer(&SimConfig::doa_grid_points)},
        {"irs_response",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.irs_response = to_enum<IrsResponseKind>(
                 k, v, {{"ula", IrsResponseKind::ula}, {"random", IrsResponseKind::random}});
         }},
        {"irs_rotation_rad", dbl(&SimConfig::irs_rotation_rad)},
        {"irs_response_seed",
         [](SimConfig& c, std::string_view k, std::string_view v) {
             c.irs_response_seed = to_u64(k, v);
         }},
        {"bs_irs_row", integer(&SimConfig::bs_irs_row)},
    };
    return table;
}

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    throw ConfigError("config field '" + field + "': " + why);
}

void validate_link(const LinkParams& link, const std::string& prefix) {
    if (std::isnan(link.rician_k) || link.rician_k < 0.0) {
        invalid(prefix + "_rician_k", "must be >= 0 or inf");
    }
    if (!(link.alpha >= 0.0) || !std::isfinite(link.alpha)) {
        invalid(prefix + "_alpha", "must be finite and >= 0");
    }
    if (!(link.extra_loss_db >= 0.0) || !std::isfinite(link.extra_loss_db)) {
        invalid(prefix + "_extra_loss_db", "must be finite and >= 0");
    }
}

}  // namespace

std::string_view scheme_name(Scheme s) { return kSchemeNames[static_cast<int>(s)]; }

Scheme parse_scheme(std::string_view name) {
    name = trim(name);
    for (std::size_t i = 0; i < std::size(kSchemeNames); ++i) {
        if (kSchemeNames[i] == name) {
            return static_cast<Scheme>(i);
        }
    }
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected ao, dbirs, mrt_bs_irs, mrt_direct, no_irs, random_phase)");
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> schemes = {Scheme::ao,         Scheme::dbirs,
                                                Scheme::mrt_bs_irs, Scheme::mrt_direct,
                                                Scheme::no_irs,     Scheme::random_phase};
    return schemes;
}

SimConfig::SimConfig() {
    for (int d = 1; d <= 51; d += 2) {
        sweep_d_m.push_back(static_cast<double>(d));
    }
}

void SimConfig::validate() const {
    if (n_irs < 1) {
        invalid("n_irs", "must be >= 1");
    }
    if (n_bs < 2 || n_bs % 2 != 0) {
        invalid("n_bs", "must be even and >= 2 so the array splits into two sub-arrays");
    }
    if (!(spacing_wavelengths > 0.0) || !std::isfinite(spacing_wavelengths)) {
        invalid("spacing_wavelengths", "must be positive");
    }
    if (!(d_bi_m >= kReferenceDistanceM) || !std::isfinite(d_bi_m)) {
        invalid("d_bi_m", "must be >= 1 m");
    }
    if (!(d_v_m > 0.0) || !std::isfinite(d_v_m)) {
        invalid("d_v_m", "must be positive");
    }
    for (double d : sweep_d_m) {
        if (!(d >= kReferenceDistanceM && d <= d_bi_m)) {
            invalid("sweep_d_m", "distance " + format_double(d) + " outside [1, d_bi_m]");
        }
        if (link_distances(geometry_at(d)).iu_m < kReferenceDistanceM) {
            invalid("d_v_m", "IRS-UE distance falls below 1 m at d = " + format_double(d));
        }
    }
    validate_link(bu, "bu");
    validate_link(bi, "bi");
    validate_link(iu, "iu");
    if (!std::isfinite(l0_db)) {
        invalid("l0_db", "must be finite");
    }
    if (!std::isfinite(budget.pt_dbm)) {
        invalid("pt_dbm", "must be finite");
    }
    if (!std::isfinite(budget.noise_dbm)) {
        invalid("noise_dbm", "must be finite");
    }
    if (trials < 1) {
        invalid("trials", "must be >= 1");
    }
    if (threads < 0) {
        invalid("threads", "must be >= 0");
    }
    if (ao_iters < 1) {
        invalid("ao_iters", "must be >= 1");
    }
    if (ao_restarts < 0) {
        invalid("ao_restarts", "must be >= 0");
    }
    if (std::isnan(doa_snr_db) || doa_snr_db == -std::numeric_limits<double>::infinity()) {
        invalid("doa_snr_db", "must be finite or inf");
    }
    if (doa_snapshots < 1) {
        invalid("doa_snapshots", "must be >= 1");
    }
    if (doa_grid_points < 3) {
        invalid("doa_grid_points", "must be >= 3");
    }
    if (!std::isfinite(irs_rotation_rad)) {
        invalid("irs_rotation_rad", "must be finite");
    }
    if (bs_irs_row < 0 || bs_irs_row >= n_irs) {
        invalid("bs_irs_row", "must index a row of the BS-IRS matrix");
    }
}

void apply_config_value(SimConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError("unknown config field '" + std::string(key) + "'");
    }
    it->second(cfg, key, value);
}

SimConfig parse_config(std::istream& in, const std::string& origin) {
    SimConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            apply_config_value(cfg, view.substr(0, eq), view.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    return parse_config(in, path.string());
}

std::string serialize_config(const SimConfig& c) {
    std::ostringstream out;
    auto list = [](const auto& values, auto fmt) {
        std::string s;
        for (std::size_t i = 0; i < values.size(); ++i) {
            s += (i ? "," : "") + fmt(values[i]);
        }
        return s;
    };
    auto link = [&out](const char* prefix, const LinkParams& p) {
        out << prefix << "_rician_k = " << format_double(p.rician_k) << '\n'
            << prefix << "_alpha = " << format_double(p.alpha) << '\n'
            << prefix << "_extra_loss_db = " << format_double(p.extra_loss_db) << '\n';
    };
    out << "n_irs = " << c.n_irs << '\n'
        << "n_bs = " << c.n_bs << '\n'
        << "spacing_wavelengths = " << format_double(c.spacing_wavelengths) << '\n'
        << "d_bi_m = " << format_double(c.d_bi_m) << '\n'
        << "d_v_m = " << format_double(c.d_v_m) << '\n'
        << "sweep_d_m = " << list(c.sweep_d_m, format_double) << '\n';
    link("bu", c.bu);
    link("bi", c.bi);
    link("iu", c.iu);
    out << "l0_db = " << format_double(c.l0_db) << '\n'
        << "pt_dbm = " << format_double(c.budget.pt_dbm) << '\n'
        << "noise_dbm = " << format_double(c.budget.noise_dbm) << '\n'
        << "trials = " << c.trials << '\n'
        << "master_seed = " << c.master_seed << '\n'
        << "threads = " << c.threads << '\n'
        << "schemes = " << list(c.schemes, [](Scheme s) { return std::string(scheme_name(s)); })
        << '\n'
        << "ao_iters = " << c.ao_iters << '\n'
        << "ao_init = " << (c.ao_init == AoInit::reference ? "reference" : "zeros") << '\n'
        << "ao_restarts = " << c.ao_restarts << '\n'
        << "dbirs_mode = " << (c.dbirs_mode == DbirsMode::idealized ? "idealized" : "full_leakage")
        << '\n'
        << "power_mode = " << (c.power_mode == PowerMode::paper ? "paper" : "matched") << '\n'
        << "aggregation = " << (c.aggregation == Aggregation::linear_mean ? "linear" : "db") << '\n'
        << "dbirs_doa = " << (c.dbirs_doa == DoaSource::geometry ? "geometry" : "music") << '\n'
        << "doa_snr_db = " << format_double(c.doa_snr_db) << '\n'
        << "doa_snapshots = " << c.doa_snapshots << '\n'
        << "doa_grid_points = " << c.doa_grid_points << '\n'
        << "irs_response = " << (c.irs_response == IrsResponseKind::ula ? "ula" : "random") << '\n'
        << "irs_rotation_rad = " << format_double(c.irs_rotation_rad) << '\n'
        << "irs_response_seed = " << c.irs_response_seed << '\n'
        << "bs_irs_row = " << c.bs_irs_row << '\n';
    return out.str();
}

std::uint64_t config_hash(const SimConfig& cfg) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : serialize_config(cfg)) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view field) {
    std::vector<double> out;
    for (std::string_view item : split_list(text)) {
        out.push_back(to_double(field, item));
    }
    return out;
}

std::vector<int> parse_int_list(std::string_view text, std::string_view field) {
    std::vector<int> out;
    for (std::string_view item : split_list(text)) {
        out.push_back(to_int(field, item));
    }
    return out;
}

std::vector<Scheme> parse_scheme_list(std::string_view text) {
    std::vector<Scheme> out;
    for (std::string_view item : split_list(text)) {
        const Scheme s = parse_scheme(item);
        if (std::find(out.begin(), out.end(), s) == out.end()) {
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace irsim
