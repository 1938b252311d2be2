#include "mixroute/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json_util.hpp"

namespace mixroute {

namespace ju = jsonutil;

void save_model(const GmmModel& model, const std::filesystem::path& path) {
    ju::ordered_json j;
    j["dimension"] = model.dimension();
    auto& comps = j["components"] = ju::ordered_json::array();
    for (const auto& c : model.components()) {
        ju::ordered_json jc;
        jc["weight"] = c.weight();
        jc["mean"] = c.mean();
        jc["covariance"] = c.covariance().data();  // row-major
        comps.push_back(std::move(jc));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_model: cannot open " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("save_model: write failed for " + path.string());
}

GmmModel load_model(const std::filesystem::path& path) {
    const std::string ctx = "model file " + path.string();
    std::ifstream in(path);
    if (!in) throw std::runtime_error(ctx + ": cannot open");
    ju::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(ctx + ": invalid JSON: " + e.what());
    }
    ju::reject_unknown(j, {"dimension", "components"}, ctx);
    const auto d = ju::require(j, "dimension", ctx).get<std::size_t>();
    const auto& comps = ju::require(j, "components", ctx);
    if (!comps.is_array() || comps.empty()) {
        throw std::runtime_error(ctx + ": \"components\" must be a non-empty array");
    }
    std::vector<GaussianComponent> built;
    built.reserve(comps.size());
    for (const auto& jc : comps) {
        ju::reject_unknown(jc, {"weight", "mean", "covariance"}, ctx);
        const double weight = ju::require_number(jc, "weight", ctx);
        auto mean = ju::require(jc, "mean", ctx).get<std::vector<double>>();
        auto flat = ju::require(jc, "covariance", ctx).get<std::vector<double>>();
        if (mean.size() != d) {
            throw std::runtime_error(ctx + ": component mean has wrong dimension");
        }
        if (flat.size() != d * d) {
            throw std::runtime_error(ctx + ": component covariance must hold d*d reals");
        }
        Matrix cov(d, d);
        cov.data() = std::move(flat);
        try {
            built.emplace_back(weight, std::move(mean), std::move(cov));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(ctx + ": " + e.what());
        }
    }
    try {
        return GmmModel(std::move(built));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(ctx + ": " + e.what());
    }
}

}  // namespace mixroute
