// SPDX-License-Identifier: Apache-2.0

#include "irsim/schemes.hpp"

#include <cmath>
#include <string>

#include "irsim/errors.hpp"
#include "irsim/random.hpp"

namespace irsim {

namespace {

constexpr double kRankOneTolerance = 1e-9;

double phase_of(cdouble z) { return z == cdouble{} ? 0.0 : std::arg(z); }

void require_n_irs(const ChannelSet& ch, Eigen::Index n, const char* what) {
    if (n != ch.n_irs()) {
        throw DimensionError(std::string(what) + ": reflection state has " + std::to_string(n) +
                             " elements, channel has " + std::to_string(ch.n_irs()));
    }
}

void require_n_bs(const ChannelSet& ch, const BeamformerWeights& w, const char* what) {
    if (w.size() != ch.n_bs()) {
        throw DimensionError(std::string(what) + ": weight length " + std::to_string(w.size()) +
                             " does not match " + std::to_string(ch.n_bs()) + " BS antennas");
    }
}

// Unconjugated a^T b.
cdouble bilinear(const CVector& a, const CVector& b) { return (a.array() * b.array()).sum(); }

double objective(const CVector& v, const BeamformerWeights& w) {
    return std::norm(bilinear(v, w.vector()));
}

}  // namespace

double wrap_phase(double phi) {
    double wrapped = std::fmod(phi, kTwoPi);
    if (wrapped < 0.0) {
        wrapped += kTwoPi;
    }
    // fmod of a tiny negative number can round back up to exactly 2*pi.
    if (wrapped >= kTwoPi) {
        wrapped = 0.0;
    }
    return wrapped;
}

ReflectionState::ReflectionState(RVector phases)
    : ReflectionState(phases, RVector::Ones(phases.size())) {}

ReflectionState::ReflectionState(RVector phases, RVector amplitudes)
    : phases_(std::move(phases)),
      amplitudes_(std::move(amplitudes)) {
    if (phases_.size() != amplitudes_.size()) {
        throw DimensionError("ReflectionState: phases and amplitudes differ in length");
    }
    for (Eigen::Index n = 0; n < phases_.size(); ++n) {
        if (!std::isfinite(phases_[n])) {
            throw DomainError("ReflectionState: non-finite phase at element " + std::to_string(n));
        }
        phases_[n] = wrap_phase(phases_[n]);
        if (!(amplitudes_[n] >= 0.0 && amplitudes_[n] <= 1.0)) {
            throw DomainError("ReflectionState: amplitude at element " + std::to_string(n) +
                              " outside [0, 1]");
        }
    }
}

ReflectionState ReflectionState::zeros(Eigen::Index n) { return ReflectionState(RVector::Zero(n)); }

CVector ReflectionState::coefficients() const {
    CVector c(phases_.size());
    for (Eigen::Index n = 0; n < phases_.size(); ++n) {
        c[n] = std::polar(amplitudes_[n], phases_[n]);
    }
    return c;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

SchemeResult make_result(double snr_linear, std::vector<BeamformerWeights> weights,
                         ReflectionState reflection) {
    SchemeResult r;
    r.snr_linear = snr_linear;
    r.snr_db = 10.0 * std::log10(snr_linear);
    r.spectral_efficiency = std::log2(1.0 + snr_linear);
    r.weights = std::move(weights);
    r.reflection = std::move(reflection);
    return r;
}

CVector combined_channel(const ChannelSet& ch, const ReflectionState& refl) {
    ch.check_dimensions();
    require_n_irs(ch, refl.size(), "combined_channel");
    const CVector weighted = ch.g.cwiseProduct(refl.coefficients());
    return ch.H.transpose() * weighted + ch.h_d;
}

SchemeResult snr(const ChannelSet& ch, const ReflectionState& refl, const BeamformerWeights& w,
                 const LinkBudget& budget) {
    require_n_bs(ch, w, "snr");
    const CVector v = combined_channel(ch, refl);
    return make_result(budget.snr_scale() * objective(v, w), {w}, refl);
}

// ---------------------------------------------------------------------------

DbirsScalars dbirs_extract(const ChannelSet& ch, Eigen::Index n_sub) {
    ch.check_dimensions();
    if (n_sub < 1 || 2 * n_sub != ch.n_bs()) {
        throw DimensionError("dbirs_extract: sub-array size " + std::to_string(n_sub) +
                             " does not split " + std::to_string(ch.n_bs()) +
                             " BS antennas into two halves");
    }
    const CMatrix block = ch.H.leftCols(n_sub);
    if (block.rows() > 1 && n_sub > 1) {
        const Eigen::JacobiSVD<CMatrix> svd(block);
        const RVector& sv = svd.singularValues();
        if (sv[0] > 0.0 && sv[1] > kRankOneTolerance * sv[0]) {
            throw StructuralError("dbirs_extract: BS-IRS block is not rank one (sigma2/sigma1 = " +
                                  std::to_string(sv[1] / sv[0]) + ")");
        }
    }
    // With a1[0] = 1 the rank-one factor h is the reference-antenna column itself.
    return DbirsScalars{block.col(0), ch.g, ch.h_d[n_sub]};
}

ReflectionState dbirs_optimal_phases(const DbirsScalars& scalars) {
    if (scalars.h.size() != scalars.g.size()) {
        throw DimensionError("dbirs_optimal_phases: h and g differ in length");
    }
    const double direct = phase_of(scalars.h_d);
    RVector phases(scalars.h.size());
    for (Eigen::Index n = 0; n < phases.size(); ++n) {
        phases[n] = direct - (phase_of(scalars.h[n]) + phase_of(scalars.g[n]));
    }
    return ReflectionState(phases);
}

ReflectionState dbirs_optimal_phases(const ChannelSet& ch) {
    return dbirs_optimal_phases(dbirs_extract(ch, ch.n_bs() / 2));
}

DbirsConfiguration dbirs_configure(const ChannelSet& ch, double theta_irs, double theta_ue,
                                   const UniformLinearArray& sub1,
                                   const UniformLinearArray& sub2) {
    if (sub1.num_elements() != sub2.num_elements() ||
        sub1.num_elements() + sub2.num_elements() != ch.n_bs()) {
        throw DimensionError("dbirs_configure: sub-arrays do not partition the BS array");
    }
    DbirsScalars scalars = dbirs_extract(ch, sub1.num_elements());
    ReflectionState reflection = dbirs_optimal_phases(scalars);
    return DbirsConfiguration{sub1,
                              sub2,
                              theta_irs,
                              theta_ue,
                              conjugate_beamformer(sub1, theta_irs),
                              conjugate_beamformer(sub2, theta_ue),
                              std::move(reflection),
                              std::move(scalars)};
}

SchemeResult dbirs_snr(const ChannelSet& ch, const DbirsConfiguration& conf,
                       const LinkBudget& budget, DbirsMode mode, PowerMode power,
                       const GeometryAngles* actual) {
    const double power_scale = power == PowerMode::matched ? 0.5 : 1.0;
    const double amp_scale = std::sqrt(power_scale);
    std::vector<BeamformerWeights> weights{BeamformerWeights(conf.w1.vector() * amp_scale),
                                           BeamformerWeights(conf.w2.vector() * amp_scale)};

    if (mode == DbirsMode::idealized) {
        const double theta_irs = actual != nullptr ? actual->theta_irs : conf.theta_irs;
        const double theta_ue = actual != nullptr ? actual->theta_ue : conf.theta_ue;
        const cdouble to_irs = beam_pattern(conf.sub1, conf.w1, theta_irs);
        const cdouble to_ue = beam_pattern(conf.sub2, conf.w2, theta_ue);
        const CVector c = conf.reflection.coefficients();
        cdouble reflected{};
        for (Eigen::Index n = 0; n < c.size(); ++n) {
            reflected += conf.scalars.g[n] * c[n] * conf.scalars.h[n];
        }
        const cdouble total = reflected * to_irs + conf.scalars.h_d * to_ue;
        return make_result(power_scale * budget.snr_scale() * std::norm(total), std::move(weights),
                           conf.reflection);
    }

    CVector stacked(ch.n_bs());
    stacked << conf.w1.vector(), conf.w2.vector();
    const CVector v = combined_channel(ch, conf.reflection);
    const double gain = std::norm(bilinear(v, stacked));
    return make_result(power_scale * budget.snr_scale() * gain, std::move(weights),
                       conf.reflection);
}

double dbirs_snr_max(const DbirsScalars& scalars, Eigen::Index n_sub, const LinkBudget& budget) {
    double amplitude = std::abs(scalars.h_d);
    for (Eigen::Index n = 0; n < scalars.h.size(); ++n) {
        amplitude += std::abs(scalars.g[n]) * std::abs(scalars.h[n]);
    }
    return static_cast<double>(n_sub) * budget.snr_scale() * amplitude * amplitude;
}

// ---------------------------------------------------------------------------

ReflectionState optimal_phases_given_w(const ChannelSet& ch, const BeamformerWeights& w) {
    ch.check_dimensions();
    require_n_bs(ch, w, "optimal_phases_given_w");
    const CVector reflected = ch.H * w.vector();
    const double direct = phase_of(bilinear(ch.h_d, w.vector()));
    RVector phases(ch.n_irs());
    for (Eigen::Index n = 0; n < phases.size(); ++n) {
        phases[n] = direct - phase_of(ch.g[n]) - phase_of(reflected[n]);
    }
    return ReflectionState(phases);
}

ReflectionState ao_reference_init(const ChannelSet& ch) {
    ch.check_dimensions();
    CVector e0 = CVector::Zero(ch.n_bs());
    e0[0] = 1.0;
    return optimal_phases_given_w(ch, BeamformerWeights(e0));
}

SchemeResult ao_optimize(const ChannelSet& ch, const LinkBudget& budget, int iters,
                         const ReflectionState& init, AoTrace* trace) {
    if (iters < 1) {
        throw DomainError("ao_optimize: iters must be >= 1");
    }
    require_n_irs(ch, init.size(), "ao_optimize");
    auto record = [trace](double value) {
        if (trace != nullptr) {
            trace->objective.push_back(value);
        }
    };

    ReflectionState theta = init;
    for (int it = 0; it < iters; ++it) {
        const CVector v = combined_channel(ch, theta);
        const BeamformerWeights w = BeamformerWeights::matched(v);
        record(v.squaredNorm());
        theta = optimal_phases_given_w(ch, w);
        record(objective(combined_channel(ch, theta), w));
    }
    const CVector v = combined_channel(ch, theta);
    BeamformerWeights w = BeamformerWeights::matched(v);
    record(v.squaredNorm());
    return make_result(budget.snr_scale() * v.squaredNorm(), {std::move(w)}, std::move(theta));
}

SchemeResult mrt_direct(const ChannelSet& ch, const LinkBudget& budget) {
    const BeamformerWeights w = BeamformerWeights::matched(ch.h_d);
    return snr(ch, optimal_phases_given_w(ch, w), w, budget);
}

SchemeResult mrt_bs_irs(const ChannelSet& ch, const LinkBudget& budget, Eigen::Index row) {
    ch.check_dimensions();
    if (row < 0 || row >= ch.n_irs()) {
        throw DimensionError("mrt_bs_irs: row " + std::to_string(row) + " out of range");
    }
    const BeamformerWeights w = BeamformerWeights::matched(ch.H.row(row).transpose());
    return snr(ch, optimal_phases_given_w(ch, w), w, budget);
}

SchemeResult random_phase_scheme(const ChannelSet& ch, const LinkBudget& budget, Rng& rng) {
    RVector phases(ch.n_irs());
    for (Eigen::Index n = 0; n < phases.size(); ++n) {
        phases[n] = uniform_phase(rng);
    }
    ReflectionState theta(phases);
    const BeamformerWeights w = BeamformerWeights::matched(combined_channel(ch, theta));
    return snr(ch, theta, w, budget);
}

SchemeResult no_irs_baseline(const ChannelSet& ch, const LinkBudget& budget) {
    BeamformerWeights w = BeamformerWeights::matched(ch.h_d);
    return make_result(budget.snr_scale() * ch.h_d.squaredNorm(), {std::move(w)},
                       ReflectionState{});
}

}  // namespace irsim
