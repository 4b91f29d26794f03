// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "irsim/channel.hpp"
#include "irsim/config.hpp"
#include "irsim/errors.hpp"
#include "test_support.hpp"

namespace irsim {
namespace {

bool bit_identical(const CMatrix& a, const CMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(cdouble) * a.size()) == 0;
}

TEST(LinkDistances, UeBelowIrs) {
    const LinkDistances d = link_distances(Geometry{51.0, 2.0, 51.0});
    EXPECT_NEAR(d.bu_m, std::sqrt(2605.0), 1e-12);
    EXPECT_NEAR(d.bu_m, 51.0392, 1e-4);
    EXPECT_DOUBLE_EQ(d.iu_m, 2.0);
}

TEST(LinkDistances, UeNearBs) {
    const LinkDistances d = link_distances(Geometry{51.0, 2.0, 1e-9});
    EXPECT_NEAR(d.bu_m, 2.0, 1e-9);
    EXPECT_NEAR(d.iu_m, std::sqrt(2605.0), 1e-8);
}

TEST(LinkDistances, Midpoint) {
    const LinkDistances d = link_distances(Geometry{51.0, 2.0, 25.0});
    EXPECT_NEAR(d.bu_m, 25.0799, 1e-4);
    EXPECT_NEAR(d.iu_m, 26.0768, 1e-4);
}

TEST(LinkDistances, MirrorSymmetry) {
    for (double d = 1.0; d <= 50.0; d += 0.5) {
        const LinkDistances a = link_distances(Geometry{51.0, 2.0, d});
        const LinkDistances b = link_distances(Geometry{51.0, 2.0, 51.0 - d});
        EXPECT_NEAR(a.bu_m, b.iu_m, 1e-12);
        EXPECT_NEAR(a.iu_m, b.bu_m, 1e-12);
    }
}

TEST(PathLoss, ReferenceDistance) {
    for (double alpha : {0.0, 2.0, 3.0, 4.5}) {
        EXPECT_NEAR(path_loss_linear(1.0, alpha, -30.0, 0.0), 1e-3, 1e-18);
    }
}

TEST(PathLoss, BsIrsLink) {
    const double expected = std::pow(10.0, -64.15140352195873 / 10.0);
    EXPECT_NEAR(path_loss_linear(51.0, 2.0, -30.0, 0.0) / expected, 1.0, 1e-12);
}

TEST(PathLoss, ExtraLossAdds) {
    EXPECT_NEAR(path_loss_linear(10.0, 3.0, -30.0, 10.0) / 1e-7, 1.0, 1e-12);
}

TEST(PathLoss, BelowReferenceIsDomainError) {
    EXPECT_THROW(path_loss_linear(0.5, 2.0, -30.0, 0.0), DomainError);
}

TEST(PathLoss, StrictlyDecreasing) {
    for (double alpha : {0.5, 2.0, 3.0}) {
        double previous = path_loss_linear(1.0, alpha, -30.0, 10.0);
        for (double d = 1.25; d < 500.0; d *= 1.25) {
            const double current = path_loss_linear(d, alpha, -30.0, 10.0);
            ASSERT_LT(current, previous);
            previous = current;
        }
    }
}

TEST(RicianSample, LosOnlyIsDeterministic) {
    const CVector los = steering_vector(UniformLinearArray(8), 0.3);
    Rng rng(1);
    const Rng before = rng;
    const CVector h = rician_sample(rng, LinkParams::kLosOnly, los, 0.25);
    EXPECT_NEAR((h - 0.25 * los).norm(), 0.0, 0.0);
    EXPECT_TRUE(rng == before);
}

TEST(RicianSample, RayleighSecondMoment) {
    const CVector los = steering_vector(UniformLinearArray(4), -0.2);
    Rng rng(2);
    const double scale = 0.7;
    double power = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        power += std::norm(rician_sample(rng, 0.0, los, scale)[1]);
    }
    EXPECT_NEAR(power / draws, scale * scale, 0.02 * scale * scale);
}

TEST(RicianSample, RicianMean) {
    const CVector los = steering_vector(UniformLinearArray(4), 0.6);
    Rng rng(5);
    CVector mean = CVector::Zero(4);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        mean += rician_sample(rng, 3.0, los, 1.0);
    }
    mean /= static_cast<double>(draws);
    for (int n = 0; n < 4; ++n) {
        const cdouble expected = std::sqrt(0.75) * los[n];
        EXPECT_LT(std::abs(mean[n] - expected), 0.02 * std::abs(expected)) << n;
    }
}

TEST(RicianSample, RejectsNonUnitShape) {
    Rng rng(1);
    EXPECT_THROW(rician_sample(rng, 0.0, CVector::Constant(3, 2.0), 1.0), DomainError);
}

TEST(GeometryAngles, Examples) {
    EXPECT_NEAR(geometry_angles(Geometry{51.0, 2.0, 51.0}).theta_ue, std::atan2(2.0, 51.0), 1e-15);
    EXPECT_NEAR(geometry_angles(Geometry{51.0, 2.0, 51.0}).theta_ue, 0.03920, 1e-5);
    EXPECT_NEAR(geometry_angles(Geometry{51.0, 2.0, 2.0}).theta_ue, kPi / 4.0, 1e-15);
    for (double d : {1.0, 17.0, 51.0}) {
        EXPECT_EQ(geometry_angles(Geometry{51.0, 2.0, d}).theta_irs, 0.0);
    }
}

TEST(GenerateChannels, DefaultDimensionsAndRankOne) {
    const SimConfig cfg;
    Rng rng(9);
    const ChannelSet ch = generate_channels(cfg, cfg.geometry_at(25.0), rng);
    EXPECT_EQ(ch.h_d.size(), 16);
    EXPECT_EQ(ch.H.rows(), 200);
    EXPECT_EQ(ch.H.cols(), 16);
    EXPECT_EQ(ch.g.size(), 200);
    const Eigen::JacobiSVD<CMatrix> svd(ch.H);
    EXPECT_LT(svd.singularValues()[1], 1e-9 * svd.singularValues()[0]);
}

TEST(GenerateChannels, BsIrsEntriesCarryPathLoss) {
    const SimConfig cfg;
    Rng rng(10);
    const ChannelSet ch = generate_channels(cfg, cfg.geometry_at(7.0), rng);
    const double expected = std::pow(10.0, -64.15140352195873 / 20.0);
    for (Eigen::Index r = 0; r < ch.H.rows(); ++r) {
        for (Eigen::Index c = 0; c < ch.H.cols(); ++c) {
            ASSERT_NEAR(std::abs(ch.H(r, c)) / expected, 1.0, 1e-12);
        }
    }
}

TEST(GenerateChannels, IrsUePowerMatchesPathLoss) {
    const SimConfig cfg;
    const Geometry geo = cfg.geometry_at(51.0);
    const double per_element = std::pow(10.0, -49.03089986991944 / 10.0);
    Rng rng(12);
    double total = 0.0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        total += generate_channels(cfg, geo, rng).g.squaredNorm();
    }
    EXPECT_NEAR(total / trials / (cfg.n_irs * per_element), 1.0, 0.02);
}

TEST(GenerateChannels, DirectLinkPowerMatchesPathLoss) {
    const SimConfig cfg;
    const Geometry geo = cfg.geometry_at(15.0);
    const double expected =
        path_loss_linear(link_distances(geo).bu_m, 3.0, -30.0, 10.0);
    Rng rng(13);
    double total = 0.0;
    const int trials = 100000 / 16;
    for (int t = 0; t < trials; ++t) {
        total += generate_channels(cfg, geo, rng).h_d.squaredNorm();
    }
    EXPECT_NEAR(total / (trials * 16.0) / expected, 1.0, 0.02);
}

TEST(GenerateChannels, SameSeedIsBitIdentical) {
    const SimConfig cfg;
    Rng a(77);
    Rng b(77);
    const ChannelSet x = generate_channels(cfg, cfg.geometry_at(33.0), a);
    const ChannelSet y = generate_channels(cfg, cfg.geometry_at(33.0), b);
    EXPECT_TRUE(bit_identical(x.h_d, y.h_d));
    EXPECT_TRUE(bit_identical(x.H, y.H));
    EXPECT_TRUE(bit_identical(x.g, y.g));
}

TEST(GenerateChannels, FiniteRicianBsIrsLinkIsNotRankOne) {
    SimConfig cfg;
    cfg.n_irs = 20;
    cfg.bi.rician_k = 10.0;
    Rng rng(4);
    const ChannelSet ch = generate_channels(cfg, cfg.geometry_at(20.0), rng);
    const Eigen::JacobiSVD<CMatrix> svd(ch.H);
    EXPECT_GT(svd.singularValues()[1], 1e-3 * svd.singularValues()[0]);
}

TEST(GenerateChannels, InvalidConfig) {
    SimConfig cfg;
    cfg.n_irs = 0;
    Rng rng(1);
    EXPECT_THROW(generate_channels(cfg, cfg.geometry_at(10.0), rng), ConfigError);
    SimConfig wrong_u;
    EXPECT_THROW(generate_channels(wrong_u, wrong_u.geometry_at(10.0), rng, CVector::Ones(3)),
                 DimensionError);
}

TEST(IrsResponse, UnitModulusVariants) {
    SimConfig cfg;
    cfg.irs_rotation_rad = 0.4;
    const CVector tilted = irs_response(cfg);
    cfg.irs_response = IrsResponseKind::random;
    const CVector random_a = irs_response(cfg);
    const CVector random_b = irs_response(cfg);
    for (const CVector* u : {&tilted, &random_a}) {
        ASSERT_EQ(u->size(), cfg.n_irs);
        for (Eigen::Index n = 0; n < u->size(); ++n) {
            ASSERT_NEAR(std::abs((*u)[n]), 1.0, 1e-12);
        }
    }
    EXPECT_TRUE(bit_identical(random_a, random_b));
    EXPECT_GT((tilted - CVector::Ones(cfg.n_irs)).norm(), 1.0);

    SimConfig facing;
    EXPECT_NEAR((irs_response(facing) - CVector::Ones(facing.n_irs)).norm(), 0.0, 1e-12);
}

}  // namespace
}  // namespace irsim
