// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "irsim/types.hpp"

namespace irsim {

// Uniform linear array with isotropic elements. Spacing is in wavelengths, so the
// carrier frequency never appears explicitly: the delay of element n at angle theta
// becomes the phase 2*pi*spacing*n*sin(theta - orientation). Element 0 is the phase
// reference. Angles are radians from broadside, positive toward increasing index.
class UniformLinearArray {
public:
    explicit UniformLinearArray(int num_elements, double spacing = 0.5, double orientation = 0.0);

    int num_elements() const { return num_elements_; }
    double spacing() const { return spacing_; }
    double orientation() const { return orientation_; }

private:
    int num_elements_;
    double spacing_;
    double orientation_;
};

// Complex transmit weights with the power constraint ||w|| <= 1.
class BeamformerWeights {
public:
    static constexpr double kNormTolerance = 1e-12;

    explicit BeamformerWeights(CVector weights);

    const CVector& vector() const { return weights_; }
    Eigen::Index size() const { return weights_.size(); }
    double norm() const { return weights_.norm(); }

    // Matched filter conj(v)/||v||. Throws DegenerateError when v is zero.
    static BeamformerWeights matched(const CVector& channel);

private:
    CVector weights_;
};

CVector steering_vector(const UniformLinearArray& array, double theta);

// B(theta) = a^T(theta) w, unconjugated transpose.
cdouble beam_pattern(const UniformLinearArray& array, const BeamformerWeights& w, double theta);

// w = conj(a(theta)) / sqrt(N), which gives |B(theta)| = sqrt(N).
BeamformerWeights conjugate_beamformer(const UniformLinearArray& array, double theta);

// Two-branch partially-connected split: two contiguous halves, each with its own
// reference element. Requires an even element count.
std::pair<UniformLinearArray, UniformLinearArray> split_subarrays(const UniformLinearArray& full);

}  // namespace irsim
