// SPDX-License-Identifier: Apache-2.0

#include "irsim/random.hpp"

#include <cmath>

namespace irsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t state = splitmix64(master);
    for (std::uint64_t step : path) {
        state = splitmix64(state ^ splitmix64(step + 0x632BE59BD9B4E019ULL));
    }
    return state;
}

Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    return Rng{derive_seed(master, path)};
}

cdouble complex_normal(Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

double uniform_phase(Rng& rng) {
    std::uniform_real_distribution<double> uniform(0.0, kTwoPi);
    return uniform(rng);
}

}  // namespace irsim
