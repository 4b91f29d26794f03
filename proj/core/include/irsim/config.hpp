// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "irsim/channel.hpp"
#include "irsim/schemes.hpp"

namespace irsim {

enum class Scheme { ao, dbirs, mrt_bs_irs, mrt_direct, no_irs, random_phase };

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

enum class Aggregation { linear_mean, db_mean };
enum class DoaSource { geometry, music };
enum class IrsResponseKind { ula, random };
enum class AoInit { reference, zeros };

struct SimConfig {
    int n_irs = 200;
    int n_bs = 16;
    double spacing_wavelengths = 0.5;

    double d_bi_m = 51.0;
    double d_v_m = 2.0;
    std::vector<double> sweep_d_m;  // default 1, 3, ..., 51

    LinkParams bu{0.0, 3.0, 10.0};
    LinkParams bi{LinkParams::kLosOnly, 2.0, 0.0};
    LinkParams iu{0.0, 3.0, 10.0};
    double l0_db = -30.0;

    LinkBudget budget{};

    int trials = 1000;
    std::uint64_t master_seed = 1;
    int threads = 0;  // 0 = hardware concurrency

    std::vector<Scheme> schemes = all_schemes();
    int ao_iters = 3;
    AoInit ao_init = AoInit::reference;
    int ao_restarts = 0;  // extra random-phase starts on top of ao_init
    DbirsMode dbirs_mode = DbirsMode::idealized;
    PowerMode power_mode = PowerMode::paper;
    Aggregation aggregation = Aggregation::linear_mean;

    DoaSource dbirs_doa = DoaSource::geometry;
    double doa_snr_db = 20.0;
    int doa_snapshots = 100;
    int doa_grid_points = 1801;

    IrsResponseKind irs_response = IrsResponseKind::ula;
    double irs_rotation_rad = 0.0;
    std::uint64_t irs_response_seed = 7;

    int bs_irs_row = 0;

    SimConfig();

    Geometry geometry_at(double d_m) const { return Geometry{d_bi_m, d_v_m, d_m}; }

    // Throws ConfigError naming the first offending field.
    void validate() const;
};

// Flat "key = value" text, '#' starts a comment. Units are part of the key names.
SimConfig parse_config(std::istream& in, const std::string& origin = "<stream>");
SimConfig load_config(const std::filesystem::path& path);

// Applies one key/value pair with the same rules as the file parser.
void apply_config_value(SimConfig& cfg, std::string_view key, std::string_view value);

// Canonical text form; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const SimConfig& cfg);

// FNV-1a of the canonical text form.
std::uint64_t config_hash(const SimConfig& cfg);

std::vector<double> parse_double_list(std::string_view text, std::string_view field);
std::vector<int> parse_int_list(std::string_view text, std::string_view field);
std::vector<Scheme> parse_scheme_list(std::string_view text);

}  // namespace irsim
