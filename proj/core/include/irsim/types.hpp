// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace irsim {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Every Monte-Carlo worker owns one of these, seeded through derive_seed().
using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace irsim
