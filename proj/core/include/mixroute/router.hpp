#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mixroute/gmm.hpp"

namespace mixroute {

enum class RoutingPolicy {
    FirstMatch,  // smallest cluster index whose score passes its threshold
    BestMatch,   // highest passing score, ties to the smallest index
};

std::string to_string(RoutingPolicy policy);
RoutingPolicy routing_policy_from_string(const std::string& s);

enum class RoutingReason { ThresholdPass, FallbackGeneral };

std::string to_string(RoutingReason reason);

// Immutable routing configuration: one model per specialist cluster
// (1..k-1, may be empty), the reference model the ratio is taken against,
// and per-cluster acceptance thresholds. The general cluster is index k.
class RouterConfig {
public:
    // `thresholds` must hold either one value (broadcast to every specialist
    // cluster) or exactly one value per cluster model.
    RouterConfig(std::vector<GmmModel> cluster_models, GmmModel reference_model,
                 std::vector<double> thresholds, RoutingPolicy policy, ScoreForm score_form);

    const std::vector<GmmModel>& cluster_models() const { return cluster_models_; }
    const GmmModel& reference_model() const { return reference_model_; }
    const std::vector<double>& thresholds() const { return thresholds_; }
    RoutingPolicy policy() const { return policy_; }
    ScoreForm score_form() const { return score_form_; }

    std::size_t dimension() const { return reference_model_.dimension(); }
    int specialist_count() const { return static_cast<int>(cluster_models_.size()); }
    int general_cluster_index() const { return specialist_count() + 1; }

private:
    std::vector<GmmModel> cluster_models_;
    GmmModel reference_model_;
    std::vector<double> thresholds_;
    RoutingPolicy policy_;
    ScoreForm score_form_;
};

struct RoutingDecision {
    std::string patient_id;
    int chosen_cluster = 0;            // 1-based; k = general
    std::vector<double> scores;        // one per specialist cluster
    RoutingReason reason = RoutingReason::FallbackGeneral;
    RoutingPolicy policy = RoutingPolicy::FirstMatch;
    ScoreForm score_form = ScoreForm::LogDifference;
};

// Scores X against every specialist cluster and picks per the policy;
// when no cluster passes its threshold (>= comparison) the decision falls
// back to the general cluster k.
RoutingDecision allot_patient(const std::string& patient_id, const FeatureSet& x,
                              const RouterConfig& cfg);

struct RouterOverrides {
    std::optional<double> threshold;
    std::optional<RoutingPolicy> policy;
    std::optional<ScoreForm> score_form;
};

struct LoadedRouterConfig {
    RouterConfig config;
    std::vector<std::filesystem::path> model_paths;  // resolved
    std::filesystem::path reference_model_path;      // resolved
};

// Router config file: {"thresholds": x | [x...], "policy", "score_form",
// "model_paths": [k-1 paths], "reference_model_path"}; relative paths are
// resolved against the config file's directory.
LoadedRouterConfig load_router_config(const std::filesystem::path& path,
                                      const RouterOverrides& overrides = {});

}  // namespace mixroute
