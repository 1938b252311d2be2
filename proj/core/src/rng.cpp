#include "mixroute/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mixroute {

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_normal_ = true;
    return r * std::cos(a);
}

double Rng::exponential(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("Rng::exponential: mean must be > 0");
    return -mean * std::log(1.0 - uniform01());
}

std::size_t Rng::categorical(const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("Rng::categorical: empty weights");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("Rng::categorical: negative weight");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("Rng::categorical: zero total weight");
    const double u = uniform01() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (u < cum) return i;
    }
    return weights.size() - 1;  // u landed on accumulated rounding slack
}

std::size_t Rng::uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::uniform_index: n must be > 0");
    auto idx = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return idx < n ? idx : n - 1;
}

}  // namespace mixroute
