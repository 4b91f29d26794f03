// SPDX-License-Identifier: Apache-2.0

#include "irsim/doa.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

#include "irsim/errors.hpp"
#include "irsim/random.hpp"

namespace irsim {

SnapshotBlock synthesize_snapshots(const UniformLinearArray& array, double theta_true,
                                   double snr_db, int num_snapshots, Rng& rng) {
    if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
        throw DomainError("synthesize_snapshots: snr_db must be finite or +inf");
    }
    if (num_snapshots < 1) {
        throw DomainError("synthesize_snapshots: num_snapshots must be >= 1");
    }
    const CVector a = steering_vector(array, theta_true);
    const bool noiseless = std::isinf(snr_db);
    const double noise_amp = noiseless ? 0.0 : std::sqrt(std::pow(10.0, -snr_db / 10.0));

    CMatrix x(array.num_elements(), num_snapshots);
    for (int t = 0; t < num_snapshots; ++t) {
        const cdouble symbol = complex_normal(rng);
        for (int m = 0; m < array.num_elements(); ++m) {
            x(m, t) = a[m] * symbol;
            if (!noiseless) {
                x(m, t) += noise_amp * complex_normal(rng);
            }
        }
    }
    return SnapshotBlock{std::move(x), array};
}

HermitianEigen jacobi_eigen(const CMatrix& input, double tol, int max_sweeps) {
    if (input.rows() != input.cols() || input.rows() == 0) {
        throw DimensionError("jacobi_eigen: matrix must be square and non-empty");
    }
    const double scale = input.norm();
    if ((input - input.adjoint()).norm() > 1e-10 * std::max(scale, 1.0)) {
        throw DomainError("jacobi_eigen: matrix is not Hermitian");
    }
    const Eigen::Index n = input.rows();
    CMatrix a = 0.5 * (input + input.adjoint());
    CMatrix v = CMatrix::Identity(n, n);

    auto off_diagonal = [&a, n] {
        double sum = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = 0; q < n; ++q) {
                if (p != q) {
                    sum += std::norm(a(p, q));
                }
            }
        }
        return std::sqrt(sum);
    };

    int sweeps = 0;
    while (sweeps < max_sweeps && off_diagonal() > tol * scale) {
        ++sweeps;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const cdouble apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) {
                    continue;
                }
                // Phase-rotate q so the pivot is real, then apply a real Jacobi rotation.
                const cdouble unphase = std::polar(1.0, -std::arg(apq));
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;

                const cdouble g_pp = c;
                const cdouble g_pq = s;
                const cdouble g_qp = -s * unphase;
                const cdouble g_qq = c * unphase;

                for (Eigen::Index k = 0; k < n; ++k) {
                    const cdouble akp = a(k, p);
                    const cdouble akq = a(k, q);
                    a(k, p) = akp * g_pp + akq * g_qp;
                    a(k, q) = akp * g_pq + akq * g_qq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cdouble apk = a(p, k);
                    const cdouble aqk = a(q, k);
                    a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
                    a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (Eigen::Index k = 0; k < n; ++k) {
                    const cdouble vkp = v(k, p);
                    const cdouble vkq = v(k, q);
                    v(k, p) = vkp * g_pp + vkq * g_qp;
                    v(k, q) = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }
    if (off_diagonal() > tol * scale) {
        throw EstimationError("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                              " sweeps");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&a](Eigen::Index i, Eigen::Index j) {
        return a(i, i).real() < a(j, j).real();
    });

    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    out.sweeps = sweeps;
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

CMatrix sample_covariance(const SnapshotBlock& block) {
    if (block.snapshots.rows() != block.array.num_elements() || block.snapshots.cols() == 0) {
        throw DimensionError("sample_covariance: snapshot block does not match its array");
    }
    return block.snapshots * block.snapshots.adjoint() /
           static_cast<double>(block.snapshots.cols());
}

double MusicEstimate::peak_to_median() const {
    if (spectrum.size() == 0) {
        return 0.0;
    }
    std::vector<double> values(spectrum.data(), spectrum.data() + spectrum.size());
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    return spectrum.maxCoeff() / *mid;
}

namespace {

// Vertex of the parabola through the log-spectrum at i-1, i, i+1.
double refine_peak(const RVector& grid, const RVector& spectrum, Eigen::Index i) {
    if (i == 0 || i + 1 >= spectrum.size()) {
        return grid[i];
    }
    const double left = std::log(spectrum[i - 1]);
    const double mid = std::log(spectrum[i]);
    const double right = std::log(spectrum[i + 1]);
    const double curvature = left - 2.0 * mid + right;
    if (!(curvature < 0.0)) {
        return grid[i];
    }
    const double offset = 0.5 * (left - right) / curvature;
    return grid[i] + std::clamp(offset, -0.5, 0.5) * (grid[i + 1] - grid[i]);
}

}  // namespace

MusicEstimate music_estimate(const SnapshotBlock& block, int num_sources, int grid_points) {
    const int m = block.array.num_elements();
    if (num_sources < 1 || num_sources >= m) {
        throw EstimationError("music_estimate: num_sources must be in [1, " +
                              std::to_string(m - 1) + "], got " + std::to_string(num_sources));
    }
    if (grid_points < 3) {
        throw DomainError("music_estimate: grid_points must be >= 3");
    }

    const CMatrix r = sample_covariance(block);
    const HermitianEigen eig = jacobi_eigen(r);
    const double largest = eig.values[m - 1];
    const bool rank_deficient = !(eig.values[0] > 1e-12 * largest);
    if (rank_deficient && num_sources >= m - 1) {
        throw EstimationError(
            "music_estimate: covariance is rank deficient and leaves no usable noise subspace");
    }
    const CMatrix noise = eig.vectors.leftCols(m - num_sources);

    MusicEstimate est;
    est.undersampled = !block.well_conditioned();
    est.grid = RVector::LinSpaced(grid_points, -kPi / 2.0, kPi / 2.0);
    est.spectrum.resize(grid_points);
    for (int k = 0; k < grid_points; ++k) {
        const CVector a = steering_vector(block.array, est.grid[k]);
        const double denom = (noise.adjoint() * a).squaredNorm();
        est.spectrum[k] = 1.0 / std::max(denom, std::numeric_limits<double>::min());
    }

    std::vector<Eigen::Index> local_max;
    for (Eigen::Index k = 0; k < grid_points; ++k) {
        const bool above_left = k == 0 || est.spectrum[k] > est.spectrum[k - 1];
        const bool above_right = k + 1 == grid_points || est.spectrum[k] >= est.spectrum[k + 1];
        if (above_left && above_right) {
            local_max.push_back(k);
        }
    }
    std::stable_sort(local_max.begin(), local_max.end(), [&est](Eigen::Index i, Eigen::Index j) {
        return est.spectrum[i] > est.spectrum[j];
    });
    if (local_max.empty()) {
        throw EstimationError("music_estimate: pseudo-spectrum has no peak");
    }
    const std::size_t keep = std::min<std::size_t>(local_max.size(), num_sources);
    for (std::size_t i = 0; i < keep; ++i) {
        est.peaks.push_back(refine_peak(est.grid, est.spectrum, local_max[i]));
    }
    est.grid_theta = est.grid[local_max.front()];
    est.theta_hat = est.peaks.front();
    return est;
}

}  // namespace irsim
