#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mixroute/linalg.hpp"

namespace mixroute {

class Rng;

using FeatureVector = std::vector<double>;

// A request's extracted feature vectors; every frame shares one dimension.
class FeatureSet {
public:
    // Empty set of a known dimension.
    explicit FeatureSet(std::size_t dimension);
    // Validates uniform dimension and finiteness. Must be non-empty
    // (an empty vector cannot carry a dimension).
    explicit FeatureSet(std::vector<FeatureVector> frames);

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return frames_.size(); }
    bool empty() const { return frames_.empty(); }
    const std::vector<FeatureVector>& frames() const { return frames_; }
    const FeatureVector& operator[](std::size_t i) const { return frames_[i]; }

    void push_back(FeatureVector frame);
    void append(const FeatureSet& other);

private:
    std::size_t dimension_;
    std::vector<FeatureVector> frames_;
};

// One weighted multivariate normal. The covariance is validated (finite,
// symmetric to 1e-12, positive definite) and factored once at construction;
// instances are immutable afterwards and safe to share across threads.
class GaussianComponent {
public:
    GaussianComponent(double weight, FeatureVector mean, Matrix covariance);

    double weight() const { return weight_; }
    const FeatureVector& mean() const { return mean_; }
    const Matrix& covariance() const { return covariance_; }
    std::size_t dimension() const { return mean_.size(); }

    const Matrix& cholesky_factor() const { return chol_; }
    double log_det_covariance() const { return log_det_; }

private:
    double weight_;
    FeatureVector mean_;
    Matrix covariance_;
    Matrix chol_;
    double log_det_;
};

// Weighted mixture of Gaussian components sharing one dimension; weights
// must sum to 1 within 1e-12. Immutable after construction.
class GmmModel {
public:
    explicit GmmModel(std::vector<GaussianComponent> components);

    std::size_t dimension() const { return dimension_; }
    std::size_t component_count() const { return components_.size(); }
    const std::vector<GaussianComponent>& components() const { return components_; }

    // Draw from the mixture: component by weight, then mean + L z.
    // Consumes rng.categorical once and rng.normal dimension() times.
    FeatureVector sample(Rng& rng) const;
    FeatureSet sample_set(std::size_t frames, Rng& rng) const;

private:
    std::vector<GaussianComponent> components_;
    std::vector<double> weights_;
    std::size_t dimension_;
};

enum class ScoreForm {
    LogDifference,  // per-frame normalized log-likelihood difference
    LogQuotient,    // quotient of the two log-likelihoods, taken literally
};

std::string to_string(ScoreForm form);
ScoreForm score_form_from_string(const std::string& s);

// ln N(x; mu, Sigma) = -1/2 [d ln(2 pi) + ln|Sigma| + (x-mu)^T Sigma^-1 (x-mu)],
// evaluated through the component's Cholesky factor.
double gaussian_log_density(const FeatureVector& x, const GaussianComponent& c);

// ln p(x | model): log-sum-exp over ln w_i + ln N_i(x).
double gmm_log_density(const FeatureVector& x, const GmmModel& model);

// ln p(X | model) = sum over frames, under frame independence. Empty set -> 0.
double sequence_log_likelihood(const FeatureSet& x, const GmmModel& model);

// Likelihood-ratio score of X for a cluster model against a reference model.
// LogDifference: (ln p(X|cluster) - ln p(X|reference)) / n.
// LogQuotient:   ln p(X|reference) / ln p(X|cluster); throws std::domain_error
//                when the denominator's magnitude is below 1e-300.
double likelihood_ratio_score(const FeatureSet& x, const GmmModel& cluster_model,
                              const GmmModel& reference_model, ScoreForm form);

// max + ln sum exp(v - max); -inf terms are skipped, empty input -> -inf.
double log_sum_exp(const std::vector<double>& values);

}  // namespace mixroute
