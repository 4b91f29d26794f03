// SPDX-License-Identifier: Apache-2.0

#include "irsim/array.hpp"

#include <cmath>
#include <string>

#include "irsim/errors.hpp"

namespace irsim {

UniformLinearArray::UniformLinearArray(int num_elements, double spacing, double orientation)
    : num_elements_(num_elements),
      spacing_(spacing),
      orientation_(orientation) {
    if (num_elements_ < 1) {
        throw DomainError("UniformLinearArray: num_elements must be >= 1, got " +
                          std::to_string(num_elements_));
    }
    if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
        throw DomainError("UniformLinearArray: spacing must be a positive number of wavelengths");
    }
    if (!std::isfinite(orientation_)) {
        throw DomainError("UniformLinearArray: orientation must be finite");
    }
}

BeamformerWeights::BeamformerWeights(CVector weights) : weights_(std::move(weights)) {
    if (weights_.size() == 0) {
        throw DimensionError("BeamformerWeights: empty weight vector");
    }
    if (weights_.norm() > 1.0 + kNormTolerance) {
        throw DomainError("BeamformerWeights: ||w|| = " + std::to_string(weights_.norm()) +
                          " exceeds the unit power constraint");
    }
}

BeamformerWeights BeamformerWeights::matched(const CVector& channel) {
    const double norm = channel.norm();
    if (!(norm > 0.0)) {
        throw DegenerateError("matched filter on an all-zero channel");
    }
    return BeamformerWeights(channel.conjugate() / norm);
}

CVector steering_vector(const UniformLinearArray& array, double theta) {
    const int n = array.num_elements();
    const double step = kTwoPi * array.spacing() * std::sin(theta - array.orientation());
    CVector a(n);
    for (int k = 0; k < n; ++k) {
        a[k] = std::polar(1.0, -step * k);
    }
    return a;
}

cdouble beam_pattern(const UniformLinearArray& array, const BeamformerWeights& w, double theta) {
    if (w.size() != array.num_elements()) {
        throw DimensionError("beam_pattern: weight length " + std::to_string(w.size()) +
                             " does not match array size " +
                             std::to_string(array.num_elements()));
    }
    return (steering_vector(array, theta).array() * w.vector().array()).sum();
}

BeamformerWeights conjugate_beamformer(const UniformLinearArray& array, double theta) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(array.num_elements()));
    return BeamformerWeights(steering_vector(array, theta).conjugate() * scale);
}

std::pair<UniformLinearArray, UniformLinearArray> split_subarrays(const UniformLinearArray& full) {
    if (full.num_elements() % 2 != 0) {
        throw DomainError("split_subarrays: element count must be even, got " +
                          std::to_string(full.num_elements()));
    }
    const int half = full.num_elements() / 2;
    return {UniformLinearArray(half, full.spacing(), full.orientation()),
            UniformLinearArray(half, full.spacing(), full.orientation())};
}

}  // namespace irsim
