// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>

#include "irsim/types.hpp"

namespace irsim {

// Mixes a master seed with a path of indices (point, trial, salt, ...) into an
// independent 64-bit seed. Pure function: the same path always gives the same seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Zero-mean circularly-symmetric complex Gaussian with E|z|^2 = 1.
cdouble complex_normal(Rng& rng);

// Uniform on [0, 2*pi).
double uniform_phase(Rng& rng);

}  // namespace irsim
