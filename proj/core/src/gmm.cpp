#include "mixroute/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mixroute/rng.hpp"

namespace mixroute {

namespace {

constexpr double kLog2Pi = 1.8378770664093455;  // ln(2*pi)
constexpr double kSymmetryTolerance = 1e-12;
constexpr double kWeightSumTolerance = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_finite(const FeatureVector& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + " contains a non-finite value");
        }
    }
}

}  // namespace

FeatureSet::FeatureSet(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw std::invalid_argument("FeatureSet: dimension must be >= 1");
}

FeatureSet::FeatureSet(std::vector<FeatureVector> frames) : dimension_(0) {
    if (frames.empty()) {
        throw std::invalid_argument(
            "FeatureSet: cannot infer dimension from an empty frame list; "
            "use FeatureSet(dimension)");
    }
    dimension_ = frames[0].size();
    if (dimension_ == 0) throw std::invalid_argument("FeatureSet: dimension must be >= 1");
    frames_.reserve(frames.size());
    for (auto& f : frames) push_back(std::move(f));
}

void FeatureSet::push_back(FeatureVector frame) {
    if (frame.size() != dimension_) {
        throw std::invalid_argument("FeatureSet: frame dimension mismatch");
    }
    check_finite(frame, "FeatureSet frame");
    frames_.push_back(std::move(frame));
}

void FeatureSet::append(const FeatureSet& other) {
    if (other.dimension() != dimension_) {
        throw std::invalid_argument("FeatureSet::append: dimension mismatch");
    }
    for (const auto& f : other.frames()) frames_.push_back(f);
}

GaussianComponent::GaussianComponent(double weight, FeatureVector mean, Matrix covariance)
    : weight_(weight), mean_(std::move(mean)), covariance_(std::move(covariance)) {
    if (!std::isfinite(weight_) || weight_ < 0.0 || weight_ > 1.0) {
        throw std::invalid_argument("GaussianComponent: weight must be finite and in [0,1]");
    }
    if (mean_.empty()) throw std::invalid_argument("GaussianComponent: empty mean");
    check_finite(mean_, "GaussianComponent mean");
    const std::size_t d = mean_.size();
    if (covariance_.rows() != d || covariance_.cols() != d) {
        throw std::invalid_argument("GaussianComponent: covariance shape does not match mean");
    }
    for (double v : covariance_.data()) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("GaussianComponent: covariance contains a non-finite value");
        }
    }
    if (symmetry_gap(covariance_) > kSymmetryTolerance) {
        throw std::invalid_argument("GaussianComponent: covariance not symmetric");
    }
    auto l = cholesky(covariance_);
    if (!l) throw std::invalid_argument("GaussianComponent: covariance not positive definite");
    chol_ = std::move(*l);
    log_det_ = log_det_from_cholesky(chol_);
}

GmmModel::GmmModel(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
    if (components_.empty()) throw std::invalid_argument("GmmModel: needs at least one component");
    dimension_ = components_[0].dimension();
    double weight_sum = 0.0;
    weights_.reserve(components_.size());
    for (const auto& c : components_) {
        if (c.dimension() != dimension_) {
            throw std::invalid_argument("GmmModel: components disagree on dimension");
        }
        weight_sum += c.weight();
        weights_.push_back(c.weight());
    }
    if (std::abs(weight_sum - 1.0) > kWeightSumTolerance) {
        throw std::invalid_argument("GmmModel: component weights must sum to 1");
    }
}

FeatureVector GmmModel::sample(Rng& rng) const {
    const auto& c = components_[rng.categorical(weights_)];
    const std::size_t d = dimension_;
    FeatureVector z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();
    FeatureVector x(c.mean());
    const Matrix& l = c.cholesky_factor();
    for (std::size_t i = 0; i < d; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += l(i, j) * z[j];
        x[i] += s;
    }
    return x;
}

FeatureSet GmmModel::sample_set(std::size_t frames, Rng& rng) const {
    FeatureSet set(dimension_);
    for (std::size_t i = 0; i < frames; ++i) set.push_back(sample(rng));
    return set;
}

std::string to_string(ScoreForm form) {
    return form == ScoreForm::LogDifference ? "LOG_DIFFERENCE" : "LOG_QUOTIENT";
}

ScoreForm score_form_from_string(const std::string& s) {
    if (s == "LOG_DIFFERENCE" || s == "diff") return ScoreForm::LogDifference;
    if (s == "LOG_QUOTIENT" || s == "quotient") return ScoreForm::LogQuotient;
    throw std::invalid_argument("unknown score form: " + s);
}

double gaussian_log_density(const FeatureVector& x, const GaussianComponent& c) {
    const std::size_t d = c.dimension();
    if (x.size() != d) throw std::invalid_argument("gaussian_log_density: dimension mismatch");
    const Matrix& l = c.cholesky_factor();
    const FeatureVector& mu = c.mean();
    // quad = ||L^-1 (x - mu)||^2, forward substitution inlined
    std::vector<double> y(d);
    double quad = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double s = x[i] - mu[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
        quad += y[i] * y[i];
    }
    return -0.5 * (static_cast<double>(d) * kLog2Pi + c.log_det_covariance() + quad);
}

double log_sum_exp(const std::vector<double>& values) {
    double max_v = -kInf;
    for (double v : values) max_v = std::max(max_v, v);
    if (max_v == -kInf) return -kInf;
    double sum = 0.0;
    for (double v : values) {
        if (v != -kInf) sum += std::exp(v - max_v);
    }
    return max_v + std::log(sum);
}

double gmm_log_density(const FeatureVector& x, const GmmModel& model) {
    if (x.size() != model.dimension()) {
        throw std::invalid_argument("gmm_log_density: dimension mismatch");
    }
    std::vector<double> terms;
    terms.reserve(model.component_count());
    for (const auto& c : model.components()) {
        if (c.weight() > 0.0) {
            terms.push_back(std::log(c.weight()) + gaussian_log_density(x, c));
        }
    }
    return log_sum_exp(terms);
}

double sequence_log_likelihood(const FeatureSet& x, const GmmModel& model) {
    if (!x.empty() && x.dimension() != model.dimension()) {
        throw std::invalid_argument("sequence_log_likelihood: dimension mismatch");
    }
    double total = 0.0;
    for (const auto& frame : x.frames()) total += gmm_log_density(frame, model);
    return total;
}

double likelihood_ratio_score(const FeatureSet& x, const GmmModel& cluster_model,
                              const GmmModel& reference_model, ScoreForm form) {
    if (x.empty()) {
        throw std::invalid_argument("likelihood_ratio_score: feature set must be non-empty");
    }
    const double ll_cluster = sequence_log_likelihood(x, cluster_model);
    const double ll_reference = sequence_log_likelihood(x, reference_model);
    if (form == ScoreForm::LogDifference) {
        return (ll_cluster - ll_reference) / static_cast<double>(x.size());
    }
    if (std::abs(ll_cluster) < 1e-300) {
        throw std::domain_error("likelihood_ratio_score: quotient denominator ~ 0");
    }
    return ll_reference / ll_cluster;
}

}  // namespace mixroute
