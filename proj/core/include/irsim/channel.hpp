// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>

#include "irsim/types.hpp"

namespace irsim {

struct SimConfig;

// BS at the origin, IRS at (d_bi, 0), UE at (d, d_v). Distances in meters.
struct Geometry {
    double d_bi_m = 51.0;
    double d_v_m = 2.0;
    double d_m = 25.0;

    void validate() const;
};

struct LinkDistances {
    double bu_m;
    double iu_m;
};

LinkDistances link_distances(const Geometry& geo);

struct GeometryAngles {
    double theta_irs;  // IRS direction seen from BS broadside
    double theta_ue;   // UE direction seen from BS broadside
};

// The BS array broadside points at the IRS, so theta_irs is 0 by construction.
GeometryAngles geometry_angles(const Geometry& geo);

struct LinkParams {
    static constexpr double kLosOnly = std::numeric_limits<double>::infinity();

    double rician_k = 0.0;  // +inf for a pure LOS link
    double alpha = 2.0;
    double extra_loss_db = 0.0;

    void validate(const char* link_name) const;
};

inline constexpr double kReferenceDistanceM = 1.0;

// Log-distance loss referenced to 1 m: l0_db - 10*alpha*log10(d) - extra_loss_db, as a
// linear power gain. Throws DomainError below the reference distance.
double path_loss_linear(double distance_m, double alpha, double l0_db, double extra_loss_db);

// scale * (sqrt(K/(K+1)) * los + sqrt(1/(K+1)) * z), z ~ CN(0, I). K = +inf draws nothing.
CVector rician_sample(Rng& rng, double k, const CVector& los, double scale);

// One fading realization of the three links.
//   h_d : BS -> UE, length n_bs
//   H   : BS -> IRS, n_irs x n_bs, row n is h_n^T
//   g   : IRS -> UE, length n_irs
struct ChannelSet {
    CVector h_d;
    CMatrix H;
    CVector g;
    Geometry geometry;
    LinkParams bu;
    LinkParams bi;
    LinkParams iu;

    Eigen::Index n_irs() const { return g.size(); }
    Eigen::Index n_bs() const { return h_d.size(); }

    // Throws DimensionError on inconsistent sizes.
    void check_dimensions() const;
};

// IRS-side unit-modulus response u of the BS-IRS link, as selected by the config.
CVector irs_response(const SimConfig& cfg);

ChannelSet generate_channels(const SimConfig& cfg, const Geometry& geo, Rng& rng);

// Same as above with an explicit IRS-side response (entries must be unit modulus).
ChannelSet generate_channels(const SimConfig& cfg, const Geometry& geo, Rng& rng,
                             const CVector& irs_side);

}  // namespace irsim
