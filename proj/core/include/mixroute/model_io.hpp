#pragma once

#include <filesystem>

#include "mixroute/gmm.hpp"

namespace mixroute {

// Model file: {"dimension": d, "components": [{"weight", "mean": [d],
// "covariance": [d*d row-major]}]}. Reals round-trip exactly; the loader
// re-validates every model invariant and rejects violating files.
void save_model(const GmmModel& model, const std::filesystem::path& path);
GmmModel load_model(const std::filesystem::path& path);

}  // namespace mixroute
