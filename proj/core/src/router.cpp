#include "mixroute/router.hpp"

#include <fstream>
#include <stdexcept>

#include "json_util.hpp"
#include "mixroute/model_io.hpp"

namespace mixroute {

namespace ju = jsonutil;

std::string to_string(RoutingPolicy policy) {
    return policy == RoutingPolicy::FirstMatch ? "FIRST_MATCH" : "BEST_MATCH";
}

RoutingPolicy routing_policy_from_string(const std::string& s) {
    if (s == "FIRST_MATCH" || s == "first") return RoutingPolicy::FirstMatch;
    if (s == "BEST_MATCH" || s == "best") return RoutingPolicy::BestMatch;
    throw std::invalid_argument("unknown routing policy: " + s);
}

std::string to_string(RoutingReason reason) {
    return reason == RoutingReason::ThresholdPass ? "THRESHOLD_PASS" : "FALLBACK_GENERAL";
}

RouterConfig::RouterConfig(std::vector<GmmModel> cluster_models, GmmModel reference_model,
                           std::vector<double> thresholds, RoutingPolicy policy,
                           ScoreForm score_form)
    : cluster_models_(std::move(cluster_models)),
      reference_model_(std::move(reference_model)),
      thresholds_(std::move(thresholds)),
      policy_(policy),
      score_form_(score_form) {
    for (const auto& m : cluster_models_) {
        if (m.dimension() != reference_model_.dimension()) {
            throw std::invalid_argument("RouterConfig: model dimensions disagree");
        }
    }
    if (thresholds_.size() == 1 && cluster_models_.size() != 1) {
        thresholds_.assign(cluster_models_.size(), thresholds_[0]);
    }
    if (thresholds_.size() != cluster_models_.size()) {
        throw std::invalid_argument(
            "RouterConfig: need one threshold, or one per cluster model");
    }
}

RoutingDecision allot_patient(const std::string& patient_id, const FeatureSet& x,
                              const RouterConfig& cfg) {
    if (x.empty()) throw std::invalid_argument("allot_patient: empty feature set");
    if (x.dimension() != cfg.dimension()) {
        throw std::invalid_argument("allot_patient: feature dimension mismatch");
    }

    RoutingDecision decision;
    decision.patient_id = patient_id;
    decision.policy = cfg.policy();
    decision.score_form = cfg.score_form();
    decision.scores.reserve(cfg.cluster_models().size());
    for (const auto& model : cfg.cluster_models()) {
        decision.scores.push_back(
            likelihood_ratio_score(x, model, cfg.reference_model(), cfg.score_form()));
    }

    int chosen = -1;  // 0-based specialist index, -1 = none passed
    if (cfg.policy() == RoutingPolicy::FirstMatch) {
        for (std::size_t i = 0; i < decision.scores.size(); ++i) {
            if (decision.scores[i] >= cfg.thresholds()[i]) {
                chosen = static_cast<int>(i);
                break;
            }
        }
    } else {
        for (std::size_t i = 0; i < decision.scores.size(); ++i) {
            if (decision.scores[i] < cfg.thresholds()[i]) continue;
            if (chosen < 0 || decision.scores[i] > decision.scores[chosen]) {
                chosen = static_cast<int>(i);
            }
        }
    }
    if (chosen >= 0) {
        decision.chosen_cluster = chosen + 1;
        decision.reason = RoutingReason::ThresholdPass;
    } else {
        decision.chosen_cluster = cfg.general_cluster_index();
        decision.reason = RoutingReason::FallbackGeneral;
    }
    return decision;
}

LoadedRouterConfig load_router_config(const std::filesystem::path& path,
                                      const RouterOverrides& overrides) {
    const std::string ctx = "router config " + path.string();
    std::ifstream in(path);
    if (!in) throw std::runtime_error(ctx + ": cannot open");
    ju::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(ctx + ": invalid JSON: " + e.what());
    }
    ju::reject_unknown(
        j, {"thresholds", "policy", "score_form", "model_paths", "reference_model_path"}, ctx);

    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    std::vector<double> thresholds;
    const auto& jt = ju::require(j, "thresholds", ctx);
    if (jt.is_number()) {
        thresholds.push_back(jt.get<double>());
    } else if (jt.is_array() && !jt.empty()) {
        thresholds = jt.get<std::vector<double>>();
    } else {
        throw std::runtime_error(ctx + ": \"thresholds\" must be a number or non-empty array");
    }
    if (overrides.threshold) thresholds.assign(1, *overrides.threshold);

    RoutingPolicy policy = routing_policy_from_string(ju::require_string(j, "policy", ctx));
    ScoreForm form = score_form_from_string(ju::require_string(j, "score_form", ctx));
    if (overrides.policy) policy = *overrides.policy;
    if (overrides.score_form) form = *overrides.score_form;

    const auto& jm = ju::require(j, "model_paths", ctx);
    if (!jm.is_array()) throw std::runtime_error(ctx + ": \"model_paths\" must be an array");
    std::vector<std::filesystem::path> model_paths;
    std::vector<GmmModel> models;
    for (const auto& p : jm) {
        model_paths.push_back(resolve(p.get<std::string>()));
        models.push_back(load_model(model_paths.back()));
    }
    const auto ref_path = resolve(ju::require_string(j, "reference_model_path", ctx));
    GmmModel reference = load_model(ref_path);

    try {
        return LoadedRouterConfig{
            RouterConfig(std::move(models), std::move(reference), std::move(thresholds), policy,
                         form),
            std::move(model_paths), ref_path};
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(ctx + ": " + e.what());
    }
}

}  // namespace mixroute
