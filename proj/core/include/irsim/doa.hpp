// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "irsim/array.hpp"
#include "irsim/types.hpp"

namespace irsim {

// num_elements x num_snapshots block of array observations.
struct SnapshotBlock {
    CMatrix snapshots;
    UniformLinearArray array;

    Eigen::Index num_snapshots() const { return snapshots.cols(); }

    // Fewer snapshots than elements gives a rank-deficient sample covariance.
    bool well_conditioned() const { return snapshots.cols() >= array.num_elements(); }
};

// Column t = a(theta) s_t + n_t with s_t ~ CN(0, 1) and n_t ~ CN(0, 10^(-snr_db/10) I).
// snr_db = +inf produces noiseless snapshots.
SnapshotBlock synthesize_snapshots(const UniformLinearArray& array, double theta_true,
                                   double snr_db, int num_snapshots, Rng& rng);

struct HermitianEigen {
    RVector values;   // ascending
    CMatrix vectors;  // column k pairs with values[k]
    int sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
// tol * ||A||_F. Intended for the small matrices of array processing (n <= ~64).
HermitianEigen jacobi_eigen(const CMatrix& a, double tol = 1e-12, int max_sweeps = 100);

// R = X X^H / T
CMatrix sample_covariance(const SnapshotBlock& block);

struct MusicEstimate {
    double theta_hat = 0.0;   // strongest peak after quadratic refinement
    double grid_theta = 0.0;  // grid angle of the strongest peak
    std::vector<double> peaks;  // refined angles, strongest first, one per source
    RVector grid;
    RVector spectrum;
    bool undersampled = false;

    double peak_to_median() const;
};

// P(theta) = 1 / (a^H(theta) E_n E_n^H a(theta)) on a uniform grid over [-pi/2, pi/2].
MusicEstimate music_estimate(const SnapshotBlock& block, int num_sources, int grid_points);

}  // namespace irsim
