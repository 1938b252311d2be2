#include "mixroute/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mixroute/rng.hpp"

namespace mixroute {

namespace {

constexpr double kLog2Pi = 1.8378770664093455;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Factored {
    Matrix chol;
    double log_det;
};

// Floors the diagonal, then factors, escalating a diagonal jitter until the
// matrix is positive definite. Mutates `cov` so the model built from it is
// exactly the matrix that was factored.
Factored floor_and_factor(Matrix& cov, const std::vector<double>& floor) {
    const std::size_t d = cov.rows();
    for (std::size_t j = 0; j < d; ++j) cov(j, j) = std::max(cov(j, j), floor[j]);
    double jitter = 0.0;
    for (int attempt = 0; attempt < 64; ++attempt) {
        if (jitter > 0.0) {
            for (std::size_t j = 0; j < d; ++j) cov(j, j) += jitter;
        }
        if (auto l = cholesky(cov)) {
            const double log_det = log_det_from_cholesky(*l);
            return {std::move(*l), log_det};
        }
        double mean_diag = 0.0;
        for (std::size_t j = 0; j < d; ++j) mean_diag += cov(j, j);
        mean_diag /= static_cast<double>(d);
        jitter = jitter == 0.0 ? std::max(1e-12, 1e-10 * mean_diag) : jitter * 10.0;
    }
    throw std::runtime_error("em_fit: covariance could not be made positive definite");
}

double mvn_log_density(const FeatureVector& x, const FeatureVector& mu, const Factored& f) {
    const std::size_t d = mu.size();
    const Matrix& l = f.chol;
    std::vector<double> y(d);
    double quad = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double s = x[i] - mu[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
        quad += y[i] * y[i];
    }
    return -0.5 * (static_cast<double>(d) * kLog2Pi + f.log_det + quad);
}

}  // namespace

EmResult em_fit(const FeatureSet& data, std::size_t components, const EmConfig& cfg) {
    const std::size_t n = data.size();
    const std::size_t d = data.dimension();
    if (n == 0) throw std::invalid_argument("em_fit: empty data");
    if (components == 0) throw std::invalid_argument("em_fit: need at least one component");
    if (n < components) {
        throw std::invalid_argument("em_fit: fewer data points (" + std::to_string(n) +
                                    ") than components (" + std::to_string(components) + ")");
    }
    if (cfg.max_iterations < 1) throw std::invalid_argument("em_fit: max_iterations must be >= 1");

    // Global ML statistics; also the source of the per-dimension floor.
    FeatureVector global_mean(d, 0.0);
    for (const auto& x : data.frames()) {
        for (std::size_t j = 0; j < d; ++j) global_mean[j] += x[j];
    }
    for (std::size_t j = 0; j < d; ++j) global_mean[j] /= static_cast<double>(n);

    Matrix global_cov(d, d, 0.0);
    for (const auto& x : data.frames()) {
        for (std::size_t a = 0; a < d; ++a) {
            const double da = x[a] - global_mean[a];
            for (std::size_t b = a; b < d; ++b) {
                global_cov(a, b) += da * (x[b] - global_mean[b]);
            }
        }
    }
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            global_cov(a, b) /= static_cast<double>(n);
            global_cov(b, a) = global_cov(a, b);
        }
    }
    std::vector<double> floor(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (!(global_cov(j, j) > 0.0)) {
            throw std::invalid_argument("em_fit: dimension " + std::to_string(j) +
                                        " has zero variance");
        }
        floor[j] = cfg.variance_floor_factor * global_cov(j, j);
    }

    // k-means++ style seeding of the means.
    Rng rng(cfg.seed);
    std::vector<std::size_t> centers;
    centers.push_back(rng.uniform_index(n));
    std::vector<double> d2(n, kInf);
    while (centers.size() < components) {
        const auto& last = data[centers.back()];
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double t = data[i][j] - last[j];
                s += t * t;
            }
            d2[i] = std::min(d2[i], s);
            total += d2[i];
        }
        if (total > 0.0) {
            centers.push_back(rng.categorical(d2));
        } else {
            // All points coincide with a chosen center; fall back to the
            // first index not yet used.
            std::size_t next = 0;
            while (std::find(centers.begin(), centers.end(), next) != centers.end()) ++next;
            centers.push_back(next % n);
        }
    }

    const bool diagonal = cfg.covariance == CovarianceType::Diagonal;
    std::vector<double> weights(components, 1.0 / static_cast<double>(components));
    std::vector<FeatureVector> means;
    std::vector<Matrix> covs;
    means.reserve(components);
    covs.reserve(components);
    for (std::size_t c = 0; c < components; ++c) {
        means.push_back(data[centers[c]]);
        if (diagonal) {
            Matrix m(d, d, 0.0);
            for (std::size_t j = 0; j < d; ++j) m(j, j) = global_cov(j, j);
            covs.push_back(std::move(m));
        } else {
            covs.push_back(global_cov);
        }
    }

    std::vector<double> trace;
    trace.reserve(16);
    std::vector<double> resp(n * components);
    std::vector<double> terms(components);
    bool converged = false;

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        // E-step, with the log-likelihood at the current parameters.
        std::vector<Factored> factored;
        factored.reserve(components);
        for (std::size_t c = 0; c < components; ++c) {
            factored.push_back(floor_and_factor(covs[c], floor));
        }
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < components; ++c) {
                terms[c] = weights[c] > 0.0
                               ? std::log(weights[c]) + mvn_log_density(data[i], means[c], factored[c])
                               : -kInf;
            }
            const double lse = log_sum_exp(terms);
            ll += lse;
            for (std::size_t c = 0; c < components; ++c) {
                resp[i * components + c] = terms[c] == -kInf ? 0.0 : std::exp(terms[c] - lse);
            }
        }
        trace.push_back(ll);
        if (iter > 0 && ll - trace[iter - 1] < cfg.tolerance) {
            converged = true;
            break;  // parameters already match the last evaluated likelihood
        }

        // M-step.
        for (std::size_t c = 0; c < components; ++c) {
            double nk = 0.0;
            for (std::size_t i = 0; i < n; ++i) nk += resp[i * components + c];
            weights[c] = nk / static_cast<double>(n);
            if (nk <= 0.0) continue;  // dead component keeps its parameters

            FeatureVector mu(d, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double r = resp[i * components + c];
                for (std::size_t j = 0; j < d; ++j) mu[j] += r * data[i][j];
            }
            for (std::size_t j = 0; j < d; ++j) mu[j] /= nk;

            Matrix cov(d, d, 0.0);
            if (diagonal) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double r = resp[i * components + c];
                    for (std::size_t j = 0; j < d; ++j) {
                        const double t = data[i][j] - mu[j];
                        cov(j, j) += r * t * t;
                    }
                }
                for (std::size_t j = 0; j < d; ++j) cov(j, j) /= nk;
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    const double r = resp[i * components + c];
                    for (std::size_t a = 0; a < d; ++a) {
                        const double da = data[i][a] - mu[a];
                        for (std::size_t b = a; b < d; ++b) {
                            cov(a, b) += r * da * (data[i][b] - mu[b]);
                        }
                    }
                }
                for (std::size_t a = 0; a < d; ++a) {
                    for (std::size_t b = a; b < d; ++b) {
                        cov(a, b) /= nk;
                        cov(b, a) = cov(a, b);
                    }
                }
            }
            means[c] = std::move(mu);
            covs[c] = std::move(cov);
        }
        // Exact renormalization so the final model's weights sum to 1.
        double wsum = 0.0;
        for (double w : weights) wsum += w;
        for (double& w : weights) w /= wsum;
    }

    std::vector<GaussianComponent> built;
    built.reserve(components);
    for (std::size_t c = 0; c < components; ++c) {
        floor_and_factor(covs[c], floor);  // ensure the stored matrix is PD as-is
        built.emplace_back(weights[c], means[c], covs[c]);
    }
    return EmResult{GmmModel(std::move(built)), std::move(trace),
                    static_cast<int>(trace.size()), converged};
}

}  // namespace mixroute
