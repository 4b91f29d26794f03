// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "irsim/array.hpp"
#include "irsim/channel.hpp"
#include "irsim/config.hpp"
#include "irsim/doa.hpp"
#include "irsim/random.hpp"
#include "irsim/schemes.hpp"

namespace {

using namespace irsim;

void BM_SteeringVector(benchmark::State& state) {
    const UniformLinearArray array(static_cast<int>(state.range(0)));
    double theta = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(steering_vector(array, theta));
        theta += 1e-6;
    }
}
BENCHMARK(BM_SteeringVector)->Arg(8)->Arg(32)->Arg(200);

void BM_GenerateChannels(benchmark::State& state) {
    SimConfig cfg;
    cfg.n_irs = static_cast<int>(state.range(0));
    const Geometry geo = cfg.geometry_at(25.0);
    Rng rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_channels(cfg, geo, rng));
    }
}
BENCHMARK(BM_GenerateChannels)->Arg(50)->Arg(200)->Arg(400);

void BM_AoOptimize(benchmark::State& state) {
    SimConfig cfg;
    cfg.n_irs = static_cast<int>(state.range(0));
    Rng rng(2);
    const ChannelSet ch = generate_channels(cfg, cfg.geometry_at(25.0), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ao_optimize(ch, cfg.budget, cfg.ao_iters, ao_reference_init(ch)));
    }
}
BENCHMARK(BM_AoOptimize)->Arg(50)->Arg(200)->Arg(400);

void BM_Dbirs(benchmark::State& state) {
    SimConfig cfg;
    cfg.n_irs = static_cast<int>(state.range(0));
    const Geometry geo = cfg.geometry_at(25.0);
    const GeometryAngles ang = geometry_angles(geo);
    Rng rng(3);
    const ChannelSet ch = generate_channels(cfg, geo, rng);
    const auto [sub1, sub2] = split_subarrays(UniformLinearArray(cfg.n_bs));
    for (auto _ : state) {
        const DbirsConfiguration conf = dbirs_configure(ch, ang.theta_irs, ang.theta_ue, sub1, sub2);
        benchmark::DoNotOptimize(dbirs_snr(ch, conf, cfg.budget));
    }
}
BENCHMARK(BM_Dbirs)->Arg(50)->Arg(200)->Arg(400);

void BM_Music(benchmark::State& state) {
    const UniformLinearArray array(8);
    Rng rng(4);
    const SnapshotBlock block = synthesize_snapshots(array, 0.35, 20.0, 100, rng);
    const int grid = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(music_estimate(block, 1, grid));
    }
}
BENCHMARK(BM_Music)->Arg(181)->Arg(1801);

void BM_JacobiEigen(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(5);
    CMatrix x(n, n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            x(r, c) = complex_normal(rng);
        }
    }
    const CMatrix a = x * x.adjoint();
    for (auto _ : state) {
        benchmark::DoNotOptimize(jacobi_eigen(a));
    }
}
BENCHMARK(BM_JacobiEigen)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
