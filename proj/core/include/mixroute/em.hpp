#pragma once

#include <cstdint>
#include <vector>

#include "mixroute/gmm.hpp"

namespace mixroute {

enum class CovarianceType { Full, Diagonal };

struct EmConfig {
    int max_iterations = 200;
    double tolerance = 1e-6;  // absolute log-likelihood improvement
    // Per-dimension variance floor as a fraction of that dimension's global
    // data variance, applied to covariance diagonals after every M-step.
    double variance_floor_factor = 1e-6;
    std::uint64_t seed = 0;
    CovarianceType covariance = CovarianceType::Full;
};

struct EmResult {
    GmmModel model;
    // Training log-likelihood evaluated at the parameters entering each
    // iteration; non-decreasing within 1e-8.
    std::vector<double> log_likelihoods;
    int iterations = 0;
    bool converged = false;
};

// Fits a mixture of `components` Gaussians by EM. Seeding is k-means++
// style: first mean uniform over the data, each further mean drawn with
// probability proportional to the squared distance to the nearest mean
// already chosen; covariances start at the (floored) global covariance,
// weights uniform. Deterministic for a fixed seed; single-threaded.
//
// Throws std::invalid_argument when data is empty, has fewer points than
// components, or some dimension has zero variance (named in the message).
EmResult em_fit(const FeatureSet& data, std::size_t components, const EmConfig& cfg);

}  // namespace mixroute
