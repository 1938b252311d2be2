#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mixroute {

// Seeded random source used everywhere randomness is needed.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard, and all variates are derived through the explicit transforms
// below rather than std::*_distribution (whose output is implementation
// defined). A given seed therefore replays the identical stream on every
// run. Transforms:
//   uniform01    (x >> 11) * 2^-53, one engine draw, range [0, 1)
//   normal       Box-Muller on (1 - u1, u2); the sine mate is cached, so
//                normals are consumed from the engine two at a time
//   exponential  -mean * log(1 - u)
//   categorical  cumulative scan of the weight vector against u * total
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal();
    double exponential(double mean);

    // Index drawn proportional to the (non-negative, not necessarily
    // normalized) weights.
    std::size_t categorical(const std::vector<double>& weights);

    // Uniform index in [0, n).
    std::size_t uniform_index(std::size_t n);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace mixroute
