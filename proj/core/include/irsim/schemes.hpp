// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "irsim/array.hpp"
#include "irsim/channel.hpp"
#include "irsim/types.hpp"

namespace irsim {

// Wraps any angle into [0, 2*pi).
double wrap_phase(double phi);

// IRS configuration Theta = diag(beta_n * exp(j*phi_n)). Phases are stored wrapped.
class ReflectionState {
public:
    ReflectionState() = default;
    explicit ReflectionState(RVector phases);
    ReflectionState(RVector phases, RVector amplitudes);

    static ReflectionState zeros(Eigen::Index n);

    const RVector& phases() const { return phases_; }
    const RVector& amplitudes() const { return amplitudes_; }
    Eigen::Index size() const { return phases_.size(); }

    CVector coefficients() const;

private:
    RVector phases_;
    RVector amplitudes_;
};

double dbm_to_mw(double dbm);

struct LinkBudget {
    double pt_dbm = 5.0;
    double noise_dbm = -80.0;

    double pt_mw() const { return dbm_to_mw(pt_dbm); }
    double noise_mw() const { return dbm_to_mw(noise_dbm); }
    double snr_scale() const { return pt_mw() / noise_mw(); }
};

// Spectral efficiency is reported in bits/s/Hz (log base 2).
struct SchemeResult {
    double snr_linear = 0.0;
    double snr_db = 0.0;
    double spectral_efficiency = 0.0;
    std::vector<BeamformerWeights> weights;  // one vector, or the sub-array pair for DB-IRS
    ReflectionState reflection;
};

SchemeResult make_result(double snr_linear, std::vector<BeamformerWeights> weights,
                         ReflectionState reflection);

// g^T Theta H + h_d^T, as a column vector of length n_bs.
CVector combined_channel(const ChannelSet& ch, const ReflectionState& refl);

SchemeResult snr(const ChannelSet& ch, const ReflectionState& refl, const BeamformerWeights& w,
                 const LinkBudget& budget);

// ---------------------------------------------------------------------------
// Dual-beam IRS
// ---------------------------------------------------------------------------

enum class DbirsMode { idealized, full_leakage };

// paper: each sub-array weight has unit norm (total 2).
// matched: both weights scaled by 1/sqrt(2) so the total equals the joint problem's budget.
enum class PowerMode { paper, matched };

// Per-element scalars of the structural model H[:, sub1] = h * a1^T(theta_I) and the
// sub-array-2 reference-antenna entry of the direct link.
struct DbirsScalars {
    CVector h;  // BS reference antenna of sub-array 1 -> IRS element n
    CVector g;  // IRS element n -> UE
    cdouble h_d;
};

// Checks that the sub-array-1 block of H is rank one (sigma_2 < 1e-9 sigma_1) and
// extracts the scalars with the reference-antenna column as phase reference.
DbirsScalars dbirs_extract(const ChannelSet& ch, Eigen::Index n_sub);

// phi_n = mod(arg(h_d) - (arg(h_n) + arg(g_n)), 2*pi), unit amplitudes. A zero h_d
// uses phase reference 0.
ReflectionState dbirs_optimal_phases(const DbirsScalars& scalars);
ReflectionState dbirs_optimal_phases(const ChannelSet& ch);

struct DbirsConfiguration {
    UniformLinearArray sub1;
    UniformLinearArray sub2;
    double theta_irs;
    double theta_ue;
    BeamformerWeights w1;
    BeamformerWeights w2;
    ReflectionState reflection;
    DbirsScalars scalars;
};

DbirsConfiguration dbirs_configure(const ChannelSet& ch, double theta_irs, double theta_ue,
                                   const UniformLinearArray& sub1, const UniformLinearArray& sub2);

// idealized: cross-beam sidelobes dropped, gamma = Pt |sum g c h B_r + h_d B_d|^2 / sigma^2.
// full_leakage: exact combined-channel form with the stacked weight [w1; w2].
// `actual` gives the true directions when the beams were steered at estimates; the
// idealized beam gains are then evaluated there instead of at the steering angles.
SchemeResult dbirs_snr(const ChannelSet& ch, const DbirsConfiguration& conf,
                       const LinkBudget& budget, DbirsMode mode = DbirsMode::idealized,
                       PowerMode power = PowerMode::paper,
                       const GeometryAngles* actual = nullptr);

// Closed form N_s * Pt * (sum |g_n||h_n| + |h_d|)^2 / sigma^2 (paper power mode).
double dbirs_snr_max(const DbirsScalars& scalars, Eigen::Index n_sub, const LinkBudget& budget);

// ---------------------------------------------------------------------------
// Joint baseline and reference schemes
// ---------------------------------------------------------------------------

// Co-phases every reflected term g_n (h_n^T w) with the direct term h_d^T w.
ReflectionState optimal_phases_given_w(const ChannelSet& ch, const BeamformerWeights& w);

struct AoTrace {
    // |v w|^2 after every half-step (w-step, theta-step, ...), starting after the
    // first w-step.
    std::vector<double> objective;
};

// Theta-step for a unit weight on BS antenna 0: co-phases every reflected path with the
// direct path as seen by the reference antenna. Unlike all-zero phases this start is
// expressed relative to the channel, so AO from it does not depend on the IRS-side
// response of a rank-one BS-IRS link.
ReflectionState ao_reference_init(const ChannelSet& ch);

// Alternating optimization from `init`: w-step (MRT on the combined channel) then
// theta-step, repeated `iters` times, closed by a final w-step.
SchemeResult ao_optimize(const ChannelSet& ch, const LinkBudget& budget, int iters,
                         const ReflectionState& init, AoTrace* trace = nullptr);

SchemeResult mrt_direct(const ChannelSet& ch, const LinkBudget& budget);
SchemeResult mrt_bs_irs(const ChannelSet& ch, const LinkBudget& budget, Eigen::Index row = 0);
SchemeResult random_phase_scheme(const ChannelSet& ch, const LinkBudget& budget, Rng& rng);
SchemeResult no_irs_baseline(const ChannelSet& ch, const LinkBudget& budget);

}  // namespace irsim
