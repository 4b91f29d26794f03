// SPDX-License-Identifier: Apache-2.0

#include "irsim/channel.hpp"

#include <cmath>
#include <string>

#include "irsim/array.hpp"
#include "irsim/config.hpp"
#include "irsim/errors.hpp"
#include "irsim/random.hpp"

namespace irsim {

namespace {

constexpr std::uint64_t kIrsResponseSalt = 0x1125ULL;

void check_unit_modulus(const CVector& v, const char* what) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(std::abs(v[i]) - 1.0) > 1e-9) {
            throw DomainError(std::string(what) + ": entry " + std::to_string(i) +
                              " is not unit modulus");
        }
    }
}

bool is_los_only(double k) { return std::isinf(k) && k > 0.0; }

}  // namespace

void Geometry::validate() const {
    if (!(d_bi_m > 0.0) || !std::isfinite(d_bi_m)) {
        throw DomainError("Geometry: d_bi_m must be positive");
    }
    if (!(d_v_m > 0.0) || !std::isfinite(d_v_m)) {
        throw DomainError("Geometry: d_v_m must be positive");
    }
    if (!(d_m > 0.0) || !std::isfinite(d_m)) {
        throw DomainError("Geometry: d_m must be positive");
    }
}

LinkDistances link_distances(const Geometry& geo) {
    const double to_irs = geo.d_bi_m - geo.d_m;
    return {std::hypot(geo.d_m, geo.d_v_m), std::hypot(to_irs, geo.d_v_m)};
}

GeometryAngles geometry_angles(const Geometry& geo) {
    return {0.0, std::atan2(geo.d_v_m, geo.d_m)};
}

void LinkParams::validate(const char* link_name) const {
    const std::string name(link_name);
    if (std::isnan(rician_k) || rician_k < 0.0) {
        throw DomainError(name + ": rician_k must be >= 0 or inf");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError(name + ": alpha must be >= 0");
    }
    if (!(extra_loss_db >= 0.0) || !std::isfinite(extra_loss_db)) {
        throw DomainError(name + ": extra_loss_db must be >= 0");
    }
}

double path_loss_linear(double distance_m, double alpha, double l0_db, double extra_loss_db) {
    if (!(distance_m >= kReferenceDistanceM)) {
        throw DomainError("path_loss_linear: distance " + std::to_string(distance_m) +
                          " m is below the 1 m reference distance");
    }
    const double loss_db =
        l0_db - 10.0 * alpha * std::log10(distance_m / kReferenceDistanceM) - extra_loss_db;
    return std::pow(10.0, loss_db / 10.0);
}

CVector rician_sample(Rng& rng, double k, const CVector& los, double scale) {
    check_unit_modulus(los, "rician_sample");
    if (std::isnan(k) || k < 0.0) {
        throw DomainError("rician_sample: K must be >= 0 or inf");
    }
    if (is_los_only(k)) {
        return scale * los;
    }
    const double los_weight = std::sqrt(k / (k + 1.0));
    const double nlos_weight = std::sqrt(1.0 / (k + 1.0));
    CVector h(los.size());
    for (Eigen::Index i = 0; i < los.size(); ++i) {
        h[i] = scale * (los_weight * los[i] + nlos_weight * complex_normal(rng));
    }
    return h;
}

void ChannelSet::check_dimensions() const {
    if (H.rows() != g.size() || H.cols() != h_d.size()) {
        throw DimensionError("ChannelSet: H is " + std::to_string(H.rows()) + "x" +
                             std::to_string(H.cols()) + " but g has " +
                             std::to_string(g.size()) + " entries and h_d has " +
                             std::to_string(h_d.size()));
    }
}

CVector irs_response(const SimConfig& cfg) {
    if (cfg.n_irs < 1) {
        throw ConfigError("irs_response: n_irs must be >= 1");
    }
    if (cfg.irs_response == IrsResponseKind::random) {
        Rng rng{derive_seed(cfg.irs_response_seed, {kIrsResponseSalt})};
        CVector u(cfg.n_irs);
        for (int n = 0; n < cfg.n_irs; ++n) {
            u[n] = std::polar(1.0, uniform_phase(rng));
        }
        return u;
    }
    // IRS broadside faces the BS; a rotation tilts its ULA axis away from that line.
    const UniformLinearArray surface(cfg.n_irs, cfg.spacing_wavelengths, cfg.irs_rotation_rad);
    return steering_vector(surface, 0.0);
}

ChannelSet generate_channels(const SimConfig& cfg, const Geometry& geo, Rng& rng) {
    return generate_channels(cfg, geo, rng, irs_response(cfg));
}

ChannelSet generate_channels(const SimConfig& cfg, const Geometry& geo, Rng& rng,
                             const CVector& irs_side) {
    if (cfg.n_irs < 1 || cfg.n_bs < 1) {
        throw ConfigError("generate_channels: n_irs and n_bs must be >= 1");
    }
    if (irs_side.size() != cfg.n_irs) {
        throw DimensionError("generate_channels: IRS response has " +
                             std::to_string(irs_side.size()) + " entries, expected " +
                             std::to_string(cfg.n_irs));
    }
    check_unit_modulus(irs_side, "generate_channels");
    geo.validate();
    cfg.bu.validate("bu");
    cfg.bi.validate("bi");
    cfg.iu.validate("iu");

    const LinkDistances dist = link_distances(geo);
    const GeometryAngles angles = geometry_angles(geo);
    const UniformLinearArray bs_array(cfg.n_bs, cfg.spacing_wavelengths);

    ChannelSet ch;
    ch.geometry = geo;
    ch.bu = cfg.bu;
    ch.bi = cfg.bi;
    ch.iu = cfg.iu;

    const double bu_amp =
        std::sqrt(path_loss_linear(dist.bu_m, cfg.bu.alpha, cfg.l0_db, cfg.bu.extra_loss_db));
    ch.h_d = rician_sample(rng, cfg.bu.rician_k, steering_vector(bs_array, angles.theta_ue), bu_amp);

    const double bi_amp =
        std::sqrt(path_loss_linear(geo.d_bi_m, cfg.bi.alpha, cfg.l0_db, cfg.bi.extra_loss_db));
    const CVector bs_side = steering_vector(bs_array, angles.theta_irs);
    ch.H = bi_amp * (irs_side * bs_side.transpose());
    if (!is_los_only(cfg.bi.rician_k)) {
        const double k = cfg.bi.rician_k;
        ch.H *= std::sqrt(k / (k + 1.0));
        const double nlos = bi_amp * std::sqrt(1.0 / (k + 1.0));
        for (Eigen::Index c = 0; c < ch.H.cols(); ++c) {
            for (Eigen::Index r = 0; r < ch.H.rows(); ++r) {
                ch.H(r, c) += nlos * complex_normal(rng);
            }
        }
    }

    // UE direction seen from the IRS; only matters when the I-U link has a LOS part.
    const UniformLinearArray surface(cfg.n_irs, cfg.spacing_wavelengths, cfg.irs_rotation_rad);
    const double ue_from_irs = std::atan2(geo.d_v_m, geo.d_bi_m - geo.d_m);
    const double iu_amp =
        std::sqrt(path_loss_linear(dist.iu_m, cfg.iu.alpha, cfg.l0_db, cfg.iu.extra_loss_db));
    ch.g = rician_sample(rng, cfg.iu.rician_k, steering_vector(surface, ue_from_irs), iu_amp);

    return ch;
}

}  // namespace irsim
